//! Seeded random sampling of words and elements for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lin::{q, Lin};
use crate::ncalg::{Letter, Word, NC};
use crate::quiver::Quiver;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn coefficient(&mut self) -> i64 {
        let c = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            c
        } else {
            -c
        }
    }

    /// A random walk of exactly `len` letters drawn from `letters`.
    pub fn walk(&mut self, num_vertices: usize, letters: &[Letter], len: usize) -> Option<Word> {
        if letters.is_empty() || len == 0 {
            return None;
        }
        let start = self.rng.gen_range(0..num_vertices as u32);
        let mut word = Word::unit(start);
        for _ in 0..len {
            let choices: Vec<&Letter> = letters.iter().filter(|l| l.source == word.target()).collect();
            let l = **choices.choose(&mut self.rng)?;
            word = Word::letter(l).mul(&word)?;
        }
        Some(word)
    }

    /// A random nonempty word of length at most `max_len`.
    pub fn word(&mut self, quiver: &Quiver, max_len: usize) -> Option<Word> {
        self.word_from(quiver.num_vertices(), &quiver.letters(), 1, max_len)
    }

    pub fn word_from(&mut self, num_vertices: usize, letters: &[Letter], min_len: usize, max_len: usize) -> Option<Word> {
        for _ in 0..200 {
            let len = self.rng.gen_range(min_len.max(1)..=max_len.max(min_len.max(1)));
            if let Some(w) = self.walk(num_vertices, letters, len) {
                return Some(w);
            }
        }
        None
    }

    /// A random nonempty closed word of length at most `max_len`.
    pub fn closed_word(&mut self, quiver: &Quiver, max_len: usize) -> Option<Word> {
        self.closed_word_from(quiver.num_vertices(), &quiver.letters(), 1, max_len)
    }

    pub fn closed_word_from(
        &mut self,
        num_vertices: usize,
        letters: &[Letter],
        min_len: usize,
        max_len: usize,
    ) -> Option<Word> {
        for _ in 0..2000 {
            let len = self.rng.gen_range(min_len.max(1)..=max_len.max(min_len.max(1)));
            if let Some(w) = self.walk(num_vertices, letters, len) {
                if w.is_closed() {
                    return Some(w);
                }
            }
        }
        None
    }

    /// A short random combination of closed words.
    pub fn closed_element(&mut self, quiver: &Quiver, max_len: usize, terms: usize) -> NC {
        let mut out = Lin::zero();
        for _ in 0..terms {
            if let Some(w) = self.closed_word(quiver, max_len) {
                let c = self.coefficient();
                out.add_term(w, q(c));
            }
        }
        out
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        items.choose(&mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let q = Quiver::a3_framed().double(0).unwrap();
        let a: Vec<_> = {
            let mut s = Sampler::new(7);
            (0..10).map(|_| s.closed_word(&q, 5)).collect()
        };
        let b: Vec<_> = {
            let mut s = Sampler::new(7);
            (0..10).map(|_| s.closed_word(&q, 5)).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|w| w.as_ref().is_some_and(|w| w.is_closed() && w.len() <= 5)));
    }
}
