//! Noncommutative Hamiltonian reduction `A_w = A / A w A` at bounded length.
//!
//! The two-sided ideal generated by the vertex components `w_i - r_i e_i` is
//! computed exactly on all words of length at most the bound `D`, one block
//! `e_t A e_s` at a time. Each block is kept in echelon form with the largest
//! word (length first, then lexicographic) as pivot, so the non-pivot words
//! form a basis of the quotient and reduction gives unique normal forms. The
//! necklace quotient `(A_w)_♮` is handled the same way on canonical necklaces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dbracket::DoubleBracketSpec;
use crate::error::{Error, Result};
use crate::expr::{render_cyclic, render_nc};
use crate::lin::{Lin, Q};
use crate::linalg::Echelon;
use crate::ncalg::{nc_block, nc_mul, nc_word, to_cyclic, words_of_length, Cyclic, Word, NC};
use crate::quiver::Quiver;
use crate::report::{Check, Witness};
use crate::sample::Sampler;

#[derive(Clone, Debug)]
pub struct Reduction {
    host: Quiver,
    relations: Vec<NC>,
    bound: usize,
    blocks: BTreeMap<(u32, u32), Echelon<Word>>,
    cyclic: Echelon<Word>,
    words: Vec<Vec<Word>>,
}

/// One row of the dimension table: quotient dimension of the words of a
/// given length from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimRow {
    pub length: usize,
    pub source: u32,
    pub target: u32,
    pub dim: usize,
}

fn max_len(x: &NC) -> usize {
    x.keys().map(Word::len).max().unwrap_or(0)
}

impl Reduction {
    /// Reduce the path algebra of `host` by the moment element `w`, deformed by
    /// `r_i` at vertex `i` when `deformation` is given, exactly up to length `bound`.
    pub fn new(host: &Quiver, w: &NC, deformation: Option<&[Q]>, bound: usize) -> Result<Reduction> {
        let nv = host.num_vertices();
        if let Some(r) = deformation {
            if r.len() != nv {
                return Err(Error::InvalidQuiver("deformation needs one scalar per vertex".into()));
            }
        }
        let mut relations = Vec::new();
        for i in 0..nv as u32 {
            let mut wi = nc_block(w, i, i);
            if let Some(r) = deformation {
                wi.add_term(Word::unit(i), -r[i as usize].clone());
            }
            relations.push(wi);
        }
        let letters = host.letters();
        let words: Vec<Vec<Word>> = (0..=bound).map(|k| words_of_length(nv, &letters, k)).collect();
        let mut blocks: BTreeMap<(u32, u32), Echelon<Word>> = BTreeMap::new();
        let mut cyclic = Echelon::new();
        for (i, wi) in relations.iter().enumerate() {
            let i = i as u32;
            if wi.is_zero() {
                continue;
            }
            let lw = max_len(wi);
            if lw > bound {
                return Err(Error::Truncation(format!("relation at vertex {} is longer than the bound", host.vertex_name(i))));
            }
            for lp in 0..=(bound - lw) {
                for p in words[lp].iter().filter(|p| p.source() == i) {
                    for q in words[..=(bound - lw - lp)].iter().flatten().filter(|q| q.target() == i) {
                        let v = nc_mul(&nc_mul(&nc_word(p.clone()), wi), &nc_word(q.clone()));
                        if !v.is_zero() {
                            blocks.entry((p.target(), q.source())).or_default().insert(&v);
                        }
                    }
                }
            }
            for q in words[..=(bound - lw)].iter().flatten().filter(|q| q.target() == i && q.source() == i) {
                let c = to_cyclic(&nc_mul(wi, &nc_word(q.clone())));
                if !c.is_zero() {
                    cyclic.insert(c.terms());
                }
            }
        }
        Ok(Reduction { host: host.clone(), relations, bound, blocks, cyclic, words })
    }

    pub fn host(&self) -> &Quiver {
        &self.host
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn relations(&self) -> &[NC] {
        &self.relations
    }

    fn check_bound(&self, x: &NC) -> Result<()> {
        if max_len(x) > self.bound {
            return Err(Error::Truncation(format!("length {} exceeds the bound {}", max_len(x), self.bound)));
        }
        Ok(())
    }

    /// The unique normal form of `x` in the quotient.
    pub fn normal_form(&self, x: &NC) -> Result<NC> {
        self.check_bound(x)?;
        let mut out = NC::zero();
        let mut by_block: BTreeMap<(u32, u32), NC> = BTreeMap::new();
        for (w, c) in x.iter() {
            by_block.entry((w.target(), w.source())).or_default().add_term(w.clone(), c.clone());
        }
        for (key, part) in by_block {
            match self.blocks.get(&key) {
                Some(e) => out.add_assign(&e.reduce(&part)),
                None => out.add_assign(&part),
            }
        }
        Ok(out)
    }

    /// Whether `x` lies in the ideal.
    pub fn in_ideal(&self, x: &NC) -> Result<bool> {
        Ok(self.normal_form(x)?.is_zero())
    }

    /// Normal-form words of a given length.
    pub fn basis(&self, length: usize) -> Vec<Word> {
        self.words
            .get(length)
            .map(|ws| {
                ws.iter()
                    .filter(|w| !self.blocks.get(&(w.target(), w.source())).is_some_and(|e| e.is_pivot(w)))
                    .cloned()
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Quotient dimensions per `(length, source, target)`, omitting zeros.
    pub fn dimension_table(&self) -> Vec<DimRow> {
        let mut out = Vec::new();
        for length in 0..=self.bound {
            let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
            for w in self.basis(length) {
                *counts.entry((w.source(), w.target())).or_default() += 1;
            }
            for ((source, target), dim) in counts {
                out.push(DimRow { length, source, target, dim });
            }
        }
        out
    }

    pub fn total_dimension(&self) -> usize {
        (0..=self.bound).map(|l| self.basis(l).len()).sum()
    }

    /// Rewrite rules: every pivot word and its normal form.
    pub fn rewrite_rules(&self) -> Vec<(Word, NC)> {
        let mut out = Vec::new();
        for e in self.blocks.values() {
            for p in e.pivots() {
                let nf = e.reduce(&Lin::basis(p.clone()));
                out.push((p.clone(), nf));
            }
        }
        out
    }

    /// Canonical representative of a necklace in `(A_w)_♮`.
    pub fn reduce_cyclic(&self, c: &Cyclic) -> Result<Cyclic> {
        self.check_bound(&c.lift())?;
        Ok(to_cyclic(&self.cyclic.reduce(c.terms())))
    }

    /// Necklace basis of `(A_w)_♮` in a given length.
    pub fn cyclic_basis(&self, length: usize) -> Vec<Cyclic> {
        let mut seen = std::collections::BTreeSet::new();
        for w in self.words.get(length).into_iter().flatten() {
            let c = to_cyclic(&nc_word(w.clone()));
            let key = c.terms().keys().next().cloned();
            if let Some(k) = key {
                if !self.cyclic.is_pivot(&k) {
                    seen.insert(k);
                }
            }
        }
        seen.into_iter().map(|w| to_cyclic(&nc_word(w))).collect()
    }

    /// Largest length a bracket of the given spec can add to `ℓ1 + ℓ2 - 2`.
    fn growth(spec: &DoubleBracketSpec) -> usize {
        spec.table().values().flat_map(|t| t.keys().map(|k| k[0].len() + k[1].len())).max().unwrap_or(0)
    }

    /// Whether a bracket of elements of these lengths stays within the bound.
    pub fn bracket_fits(&self, spec: &DoubleBracketSpec, l1: usize, l2: usize) -> bool {
        l1 + l2 + Self::growth(spec) <= self.bound + 2
    }

    /// The induced Lie bracket on `(A_w)_♮`: bracket the canonical lifts in
    /// `A_♮`, then reduce.
    pub fn induced_lie(&self, spec: &DoubleBracketSpec, c1: &Cyclic, c2: &Cyclic) -> Result<Cyclic> {
        let (l1, l2) = (max_len(&c1.lift()), max_len(&c2.lift()));
        if !self.bracket_fits(spec, l1, l2) {
            return Err(Error::Truncation(format!("bracket of lengths {l1} and {l2} exceeds the bound {}", self.bound)));
        }
        let r1 = self.reduce_cyclic(c1)?;
        let r2 = self.reduce_cyclic(c2)?;
        self.reduce_cyclic(&spec.cyclic_bracket(&r1, &r2))
    }

    /// `pr: A_♮ -> (A_w)_♮` is a Lie morphism on sampled necklaces, and the
    /// bracket vanishes against relation classes.
    pub fn check_projection_lie(&self, spec: &DoubleBracketSpec, samples: usize, seed: u64) -> Check {
        let mut s = Sampler::new(seed);
        let mut witnesses = Vec::new();
        let mut done = 0;
        let mut skipped = 0;
        let max = (self.bound + 2) / 2;
        for _ in 0..samples {
            let x = to_cyclic(&s.closed_element(&self.host, max.max(1), 2));
            let y = to_cyclic(&s.closed_element(&self.host, max.max(1), 2));
            let (l1, l2) = (max_len(&x.lift()), max_len(&y.lift()));
            if !self.bracket_fits(spec, l1, l2) {
                skipped += 1;
                continue;
            }
            done += 1;
            let up = spec.cyclic_bracket(&x, &y);
            let lhs = match self.reduce_cyclic(&up) {
                Ok(v) => v,
                Err(e) => return Check::indeterminate("pr is a Lie morphism", e.to_string()),
            };
            let rhs = match self.induced_lie(spec, &x, &y) {
                Ok(v) => v,
                Err(e) => return Check::indeterminate("pr is a Lie morphism", e.to_string()),
            };
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                witnesses.push(Witness {
                    input: format!("pr{{{0}, {1}}} - {{pr {0}, pr {1}}}", render_cyclic(&self.host, &x), render_cyclic(&self.host, &y)),
                    value: render_cyclic(&self.host, &diff),
                    arity: 1,
                });
            }
        }
        let detail = format!("{done} sampled pairs, {skipped} beyond the truncation bound");
        if done == 0 {
            return Check::indeterminate("pr is a Lie morphism", detail);
        }
        Check::from_witnesses("pr is a Lie morphism", detail, witnesses)
    }

    /// Antisymmetry and Jacobi of the induced bracket on `(A_w)_♮` on samples
    /// whose triple brackets fit in the bound.
    pub fn check_reduced_lie(&self, spec: &DoubleBracketSpec, samples: usize, seed: u64) -> Check {
        let mut s = Sampler::new(seed);
        let mut witnesses = Vec::new();
        let g = Self::growth(spec);
        let max = ((self.bound + 4).saturating_sub(g * 2) / 3).max(1);
        let mut done = 0;
        for _ in 0..samples {
            let c: Vec<Cyclic> = (0..3)
                .map(|_| self.reduce_cyclic(&to_cyclic(&s.closed_element(&self.host, max, 1))).unwrap_or_default())
                .collect();
            let lens: Vec<usize> = c.iter().map(|x| max_len(&x.lift())).collect();
            if lens.contains(&0) || lens[0] + lens[1] + lens[2] + 2 * g > self.bound + 4 {
                continue;
            }
            done += 1;
            let br = |a: &Cyclic, b: &Cyclic| self.induced_lie(spec, a, b).expect("fits by construction");
            let anti = br(&c[0], &c[1]).add(&br(&c[1], &c[0]));
            let jac = br(&c[0], &br(&c[1], &c[2])).sub(&br(&br(&c[0], &c[1]), &c[2])).sub(&br(&c[1], &br(&c[0], &c[2])));
            for (name, v) in [("antisymmetry", anti), ("Jacobi", jac)] {
                if !v.is_zero() {
                    witnesses.push(Witness {
                        input: format!("{name}({}, {}, {})", render_cyclic(&self.host, &c[0]), render_cyclic(&self.host, &c[1]), render_cyclic(&self.host, &c[2])),
                        value: render_cyclic(&self.host, &v),
                        arity: 1,
                    });
                }
            }
        }
        if done == 0 {
            return Check::indeterminate("reduced necklace Lie algebra", "no samples fit in the bound");
        }
        Check::from_witnesses("reduced necklace Lie algebra", format!("{done} sampled triples"), witnesses)
    }

    /// Render a rewrite rule list for reports.
    pub fn render_rules(&self) -> Vec<String> {
        self.rewrite_rules()
            .into_iter()
            .map(|(w, nf)| format!("{} -> {}", render_nc(&self.host, &nc_word(w)), render_nc(&self.host, &nf)))
            .collect()
    }
}

/// Convenience: `1` as a rational.
pub fn unit_scalar() -> Q {
    Q::one()
}

/// Zero check shared by callers holding a plain coefficient.
pub fn is_zero(c: &Q) -> bool {
    c.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbracket::standard_moment;
    use crate::expr::parse_nc;
    use crate::lin::q;

    fn preprojective(base: Quiver, bound: usize) -> (DoubleBracketSpec, Reduction) {
        let qb = base.double(0).unwrap();
        let spec = DoubleBracketSpec::standard(&qb).unwrap();
        let red = Reduction::new(&qb, &standard_moment(&qb), None, bound).unwrap();
        (spec, red)
    }

    /// Oracle: dimension of the quotient as (all words) - rank(ideal spanning set),
    /// computed with a single global elimination.
    fn brute_dims(qb: &Quiver, w: &NC, bound: usize, length: usize) -> usize {
        let letters = qb.letters();
        let nv = qb.num_vertices();
        let all: Vec<Word> = words_of_length(nv, &letters, length);
        let mut gens = Vec::new();
        for i in 0..nv as u32 {
            let wi = nc_block(w, i, i);
            for lp in 0..=bound {
                for p in words_of_length(nv, &letters, lp) {
                    for lq in 0..=bound {
                        if lp + lq + 2 != length {
                            continue;
                        }
                        for qq in words_of_length(nv, &letters, lq) {
                            gens.push(nc_mul(&nc_mul(&nc_word(p.clone()), &wi), &nc_word(qq)));
                        }
                    }
                }
            }
        }
        all.len() - crate::linalg::rank(&gens)
    }

    #[test]
    fn jordan_preprojective_is_commutative() {
        let (_, red) = preprojective(Quiver::jordan(), 6);
        let qb = red.host().clone();
        // K[a, a*]: length ℓ has dimension ℓ + 1.
        for l in 0..=6 {
            assert_eq!(red.basis(l).len(), l + 1);
            assert_eq!(red.basis(l).len(), brute_dims(&qb, &standard_moment(&qb), 6, l));
        }
        let x = parse_nc(&qb, "a*.a - a.a*").unwrap();
        assert!(red.in_ideal(&x).unwrap());
        let long = parse_nc(&qb, "a.a.a.a.a.a.a").unwrap();
        assert!(matches!(red.normal_form(&long), Err(Error::Truncation(_))));
    }

    #[test]
    fn a2_preprojective_is_four_dimensional() {
        let (_, red) = preprojective(Quiver::a2(), 6);
        assert_eq!(red.total_dimension(), 4);
        let qb = red.host().clone();
        assert!(red.in_ideal(&parse_nc(&qb, "a.a*").unwrap()).unwrap());
        assert!(red.in_ideal(&parse_nc(&qb, "a*.a").unwrap()).unwrap());
        assert!(red.cyclic_basis(2).is_empty());
    }

    #[test]
    fn a3_dimensions_match_oracle() {
        let (_, red) = preprojective(Quiver::a3_framed(), 4);
        let qb = red.host().clone();
        let w = standard_moment(&qb);
        for l in 0..=4 {
            assert_eq!(red.basis(l).len(), brute_dims(&qb, &w, 4, l), "length {l}");
        }
    }

    #[test]
    fn projection_is_a_lie_morphism() {
        let (spec, red) = preprojective(Quiver::jordan(), 6);
        assert!(red.check_projection_lie(&spec, 40, 1).passed());
        assert!(red.check_reduced_lie(&spec, 20, 2).passed());
        let (spec, red) = preprojective(Quiver::a3_framed(), 5);
        assert!(red.check_projection_lie(&spec, 40, 3).passed());
    }

    #[test]
    fn bracket_is_well_defined_on_relations() {
        let (spec, red) = preprojective(Quiver::a3_framed(), 6);
        let qb = red.host().clone();
        let mut s = Sampler::new(9);
        for _ in 0..30 {
            let c = to_cyclic(&s.closed_element(&qb, 3, 2));
            let i = s.range(0, qb.num_vertices() - 1) as u32;
            let Some(qw) = s.closed_word_from(qb.num_vertices(), &qb.letters(), 1, 2).filter(|w| w.source() == i) else { continue };
            let rel = to_cyclic(&nc_mul(&red.relations()[i as usize], &nc_word(qw)));
            if red.bracket_fits(&spec, 3, 4) {
                assert!(red.induced_lie(&spec, &c, &rel).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn deformed_jordan() {
        let qb = Quiver::jordan().double(0).unwrap();
        let red = Reduction::new(&qb, &standard_moment(&qb), Some(&[q(1)]), 4).unwrap();
        // a a* - a* a = 1: the first Weyl algebra, normal words a^i (a*)^j.
        let x = parse_nc(&qb, "a*.a").unwrap();
        assert_eq!(red.normal_form(&x).unwrap(), parse_nc(&qb, "a.a* - e(0)").unwrap());
    }
}
