//! Double brackets on path algebras and everything induced from them.
//!
//! A [`DoubleBracketSpec`] stores the values `⟦g, h⟧` on pairs of generators.
//! The bracket of arbitrary words follows from the Leibniz rule in the second
//! slot, `⟦x, v w⟧ = ⟦x, v⟧ w + (-1)^{|v|(|x|-n)} v ⟦x, w⟧` for the outer
//! bimodule structure, together with graded antisymmetry
//! `⟦y, x⟧ = -(-1)^{|𝔰ⁿx||𝔰ⁿy|} τ ⟦x, y⟧` where `|𝔰ⁿx| = |x| - n`.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{parse_tensor, render_cyclic, render_nc, render_tensor};
use crate::lin::{Lin, Q};
use crate::ncalg::{
    nc_block, nc_letter, nc_word, outer_left, outer_right, permute_tensor, tau, tensor2, tensor_mult, to_cyclic,
    Cyclic, Letter, Tensor, Word, NC,
};
use crate::quiver::{ArrowKind, Quiver, QuiverDoc};
use crate::report::{Check, Witness};
use crate::sample::Sampler;
use crate::sign::sign_of;

fn qs(sign: i64) -> Q {
    Q::from_integer(sign.into())
}

#[derive(Clone, Debug)]
pub struct DoubleBracketSpec {
    quiver: Quiver,
    degree: i64,
    table: BTreeMap<(u32, u32), Tensor>,
}

impl DoubleBracketSpec {
    /// Build from values on some generator pairs. Pairs supplied in only one
    /// orientation are completed by antisymmetry; pairs supplied in both are
    /// kept as given so that [`Self::check_antisymmetry`] can judge them.
    pub fn build(quiver: Quiver, degree: i64, entries: Vec<(u32, u32, Tensor)>) -> Result<Self> {
        let mut spec = DoubleBracketSpec { quiver, degree, table: BTreeMap::new() };
        for (g, h, value) in entries {
            spec.validate_entry(g, h, &value)?;
            if spec.table.insert((g, h), value).is_some() {
                return Err(Error::InvalidBracket(format!(
                    "pair ({}, {}) given twice",
                    spec.quiver.arrow(g).name,
                    spec.quiver.arrow(h).name
                )));
            }
        }
        let missing: Vec<(u32, u32, Tensor)> = spec
            .table
            .iter()
            .filter(|((g, h), _)| !spec.table.contains_key(&(*h, *g)))
            .map(|((g, h), v)| (*h, *g, spec.antisymmetric_partner(*g, *h, v)))
            .collect();
        for (h, g, v) in missing {
            spec.table.insert((h, g), v);
        }
        spec.table.retain(|_, v| !v.is_zero());
        Ok(spec)
    }

    /// The standard bracket of a doubled quiver: `⟦a, a*⟧ = e_{s(a)} ⊗ e_{t(a)}`
    /// for each original arrow `a`, and zero on all other pairs except the
    /// antisymmetric partners.
    pub fn standard(qbar: &Quiver) -> Result<Self> {
        if !qbar.is_doubled() {
            return Err(Error::InvalidQuiver("the standard bracket needs a doubled quiver".into()));
        }
        let mut entries = Vec::new();
        for id in qbar.arrows_of_kind(ArrowKind::Original) {
            let a = qbar.letter(id);
            let star = qbar.dual(id).expect("doubled");
            let value = tensor2(&Lin::basis(Word::unit(a.source)), &Lin::basis(Word::unit(a.target)));
            entries.push((id, star, value));
        }
        let degree = qbar.arrows().iter().filter(|a| a.kind == ArrowKind::Original).map(|a| {
            a.degree + qbar.arrow(a.partner.expect("doubled")).degree
        }).next().unwrap_or(0);
        Self::build(qbar.clone(), degree, entries)
    }

    /// The bracket described by a document: its explicit table if present,
    /// otherwise the standard bracket.
    pub fn from_doc(qbar: &Quiver, doc: &QuiverDoc) -> Result<Self> {
        let Some(b) = &doc.bracket else { return Self::standard(qbar) };
        let mut entries = Vec::new();
        for e in b.entries() {
            let g = qbar.arrow_id(&e.left)?;
            let h = qbar.arrow_id(&e.right)?;
            entries.push((g, h, parse_tensor(qbar, &e.value, 2)?));
        }
        Self::build(qbar.clone(), b.degree(), entries)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn table(&self) -> &BTreeMap<(u32, u32), Tensor> {
        &self.table
    }

    pub fn generators(&self) -> Vec<Letter> {
        self.quiver.letters()
    }

    fn validate_entry(&self, g: u32, h: u32, value: &Tensor) -> Result<()> {
        let (lg, lh) = (self.quiver.letter(g), self.quiver.letter(h));
        for (k, _) in value.iter() {
            if k.len() != 2 {
                return Err(Error::InvalidBracket("bracket values must be 2-tensors".into()));
            }
            let located = k[0].target() == lh.target
                && k[0].source() == lg.source
                && k[1].target() == lg.target
                && k[1].source() == lh.source;
            if !located {
                return Err(Error::InvalidBracket(format!(
                    "value of ({}, {}) is not in e_t(h) A e_s(g) # e_t(g) A e_s(h)",
                    self.quiver.arrow(g).name,
                    self.quiver.arrow(h).name
                )));
            }
            if k[0].degree() + k[1].degree() != lg.degree + lh.degree - self.degree {
                return Err(Error::InvalidBracket(format!(
                    "value of ({}, {}) has the wrong degree",
                    self.quiver.arrow(g).name,
                    self.quiver.arrow(h).name
                )));
            }
        }
        Ok(())
    }

    fn antisymmetric_partner(&self, g: u32, h: u32, value: &Tensor) -> Tensor {
        let (lg, lh) = (self.quiver.letter(g), self.quiver.letter(h));
        let s = -sign_of((lg.degree - self.degree) * (lh.degree - self.degree));
        tau(value).scaled(&qs(s))
    }

    pub fn gen_pair(&self, g: &Letter, h: &Letter) -> Tensor {
        self.table.get(&(g.id, h.id)).cloned().unwrap_or_default()
    }

    /// `⟦x, b_1 … b_l⟧ = Σ_j (-1)^{|b_{<j}|(|x|-n)} b_{<j} ⟦x, b_j⟧ b_{>j}`,
    /// given the values `⟦x, b_j⟧` on letters.
    fn leibniz_second(&self, x_degree: i64, v: &Word, mut on_letter: impl FnMut(&Letter) -> Tensor) -> Tensor {
        let mut out = Tensor::zero();
        let mut prefix_degree = 0;
        for (j, l) in v.letters().iter().enumerate() {
            let inner = on_letter(l);
            if !inner.is_zero() {
                let s = sign_of(prefix_degree * (x_degree - self.degree));
                let t = outer_right(&outer_left(&v.prefix(j), &inner), &v.suffix(j + 1));
                out.add_scaled(&t, &qs(s));
            }
            prefix_degree += l.degree;
        }
        out
    }

    /// `⟦u, h⟧` for a word `u` and a generator `h`.
    fn word_gen(&self, u: &Word, h: &Letter) -> Tensor {
        if u.is_unit() {
            return Tensor::zero();
        }
        if u.len() == 1 {
            return self.gen_pair(&u.letters()[0], h);
        }
        let swapped = self.leibniz_second(h.degree, u, |l| self.gen_pair(h, l));
        let s = -sign_of((u.degree() - self.degree) * (h.degree - self.degree));
        tau(&swapped).scaled(&qs(s))
    }

    /// `⟦u, v⟧` on words.
    pub fn words(&self, u: &Word, v: &Word) -> Tensor {
        if u.is_unit() || v.is_unit() {
            return Tensor::zero();
        }
        self.leibniz_second(u.degree(), v, |l| self.word_gen(u, l))
    }

    /// `⟦x, y⟧` on arbitrary elements.
    pub fn eval(&self, x: &NC, y: &NC) -> Tensor {
        let mut out = Tensor::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                out.add_scaled(&self.words(u, v), &(a * b));
            }
        }
        out
    }

    /// `⟦x, t⟧_L = ⟦x, t'⟧ ⊗ t''` for a 2-tensor `t`.
    pub fn bracket_l(&self, x: &Word, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (k, c) in t.iter() {
            let inner = self.words(x, &k[0]);
            for (k2, c2) in inner.iter() {
                out.add_term(vec![k2[0].clone(), k2[1].clone(), k[1].clone()], c * c2);
            }
        }
        out
    }

    /// The double Jacobiator on homogeneous words:
    /// `⟦x,⟦y,z⟧⟧_L + (-1)^{|𝔰ⁿz|(|x|+|y|)} (321)⟦z,⟦x,y⟧⟧_L
    ///  + (-1)^{|𝔰ⁿx|(|y|+|z|)} (123)⟦y,⟦z,x⟧⟧_L`
    /// with `(123): v1⊗v2⊗v3 ↦ v3⊗v1⊗v2` and `(321): v1⊗v2⊗v3 ↦ v2⊗v3⊗v1`.
    pub fn triple_words(&self, x: &Word, y: &Word, z: &Word) -> Tensor {
        let n = self.degree;
        let (dx, dy, dz) = (x.degree(), y.degree(), z.degree());
        let mut out = self.bracket_l(x, &self.words(y, z));
        let t2 = permute_tensor(&self.bracket_l(z, &self.words(x, y)), &[1, 2, 0]);
        out.add_scaled(&t2, &qs(sign_of((dz - n) * (dx + dy))));
        let t3 = permute_tensor(&self.bracket_l(y, &self.words(z, x)), &[2, 0, 1]);
        out.add_scaled(&t3, &qs(sign_of((dx - n) * (dy + dz))));
        out
    }

    /// The double Jacobiator, extended trilinearly over homogeneous words.
    pub fn triple(&self, x: &NC, y: &NC, z: &NC) -> Tensor {
        let mut out = Tensor::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                for (w, c) in z.iter() {
                    out.add_scaled(&self.triple_words(u, v, w), &(a * b * c));
                }
            }
        }
        out
    }

    /// The induced Loday bracket `{x, y} = m ⟦x, y⟧`.
    pub fn loday(&self, x: &NC, y: &NC) -> NC {
        tensor_mult(&self.eval(x, y))
    }

    /// The induced bracket on `A_♮`, computed on representative lifts.
    pub fn cyclic_bracket(&self, c1: &Cyclic, c2: &Cyclic) -> Cyclic {
        to_cyclic(&self.loday(&c1.lift(), &c2.lift()))
    }

    fn render_pair(&self, g: &Word, h: &Word) -> String {
        format!("<<{}, {}>>", render_nc(&self.quiver, &nc_word(g.clone())), render_nc(&self.quiver, &nc_word(h.clone())))
    }

    /// Antisymmetry on every generator pair.
    pub fn check_antisymmetry(&self) -> Check {
        let gens = self.generators();
        let mut witnesses = Vec::new();
        for g in &gens {
            for h in &gens {
                let lhs = self.gen_pair(h, g);
                let rhs = self.antisymmetric_partner(g.id, h.id, &self.gen_pair(g, h));
                let diff = &lhs - &rhs;
                if !diff.is_zero() {
                    witnesses.push(Witness {
                        input: format!(
                            "{} + sign tau {}",
                            self.render_pair(&Word::letter(*h), &Word::letter(*g)),
                            self.render_pair(&Word::letter(*g), &Word::letter(*h))
                        ),
                        value: render_tensor(&self.quiver, &diff),
                        arity: 2,
                    });
                }
            }
        }
        Check::from_witnesses("antisymmetry", format!("{} generator pairs", gens.len() * gens.len()), witnesses)
    }

    fn jacobi_witness(&self, x: &Word, y: &Word, z: &Word, value: &Tensor) -> Witness {
        let r = |w: &Word| render_nc(&self.quiver, &nc_word(w.clone()));
        Witness {
            input: format!("<<{}, {}, {}>>", r(x), r(y), r(z)),
            value: render_tensor(&self.quiver, value),
            arity: 3,
        }
    }

    /// The double Jacobi identity on every triple of generators.
    pub fn check_jacobi_generators(&self) -> Check {
        let gens = self.generators();
        let mut triples: Vec<(Letter, Letter, Letter)> = Vec::new();
        for x in &gens {
            for y in &gens {
                for z in &gens {
                    triples.push((*x, *y, *z));
                }
            }
        }
        let witnesses: Vec<Witness> = triples
            .par_iter()
            .filter_map(|(x, y, z)| {
                let (x, y, z) = (Word::letter(*x), Word::letter(*y), Word::letter(*z));
                let v = self.triple_words(&x, &y, &z);
                (!v.is_zero()).then(|| self.jacobi_witness(&x, &y, &z, &v))
            })
            .collect();
        Check::from_witnesses("double Jacobi (generators)", format!("{} generator triples", triples.len()), witnesses)
    }

    /// The double Jacobi identity on seeded random word triples.
    pub fn check_jacobi_samples(&self, samples: usize, seed: u64, max_len: usize) -> Check {
        let mut s = Sampler::new(seed);
        let mut triples = Vec::new();
        for _ in 0..samples {
            let words: Vec<Word> = (0..3).filter_map(|_| s.word(&self.quiver, max_len)).collect();
            if words.len() == 3 {
                triples.push((words[0].clone(), words[1].clone(), words[2].clone()));
            }
        }
        let witnesses: Vec<Witness> = triples
            .par_iter()
            .filter_map(|(x, y, z)| {
                let v = self.triple_words(x, y, z);
                (!v.is_zero()).then(|| self.jacobi_witness(x, y, z, &v))
            })
            .collect();
        Check::from_witnesses("double Jacobi (sampled words)", format!("{} word triples", triples.len()), witnesses)
    }

    /// `⟦w_i, g⟧ = δ_{s(g),i} g ⊗ e_i - δ_{t(g),i} e_i ⊗ g` for every vertex
    /// component `w_i = e_i w e_i` and generator `g`.
    pub fn check_moment(&self, w: &NC) -> Check {
        let mut witnesses = Vec::new();
        let nv = self.quiver.num_vertices() as u32;
        let mut closed = NC::zero();
        for i in 0..nv {
            closed.add_assign(&nc_block(w, i, i));
        }
        let open = w - &closed;
        if !open.is_zero() {
            witnesses.push(Witness {
                input: "w - sum_i e(i).w.e(i)".into(),
                value: render_nc(&self.quiver, &open),
                arity: 1,
            });
        }
        for i in 0..nv {
            let wi = nc_block(w, i, i);
            for g in self.generators() {
                let gw = nc_letter(g);
                let ei = Lin::basis(Word::unit(i));
                let mut expected = Tensor::zero();
                if g.source == i {
                    expected.add_assign(&tensor2(&gw, &ei));
                }
                if g.target == i {
                    expected.sub_assign(&tensor2(&ei, &gw));
                }
                let diff = &self.eval(&wi, &gw) - &expected;
                if !diff.is_zero() {
                    witnesses.push(Witness {
                        input: format!(
                            "<<{}, {}>> - expected",
                            render_nc(&self.quiver, &wi),
                            render_nc(&self.quiver, &gw)
                        ),
                        value: render_tensor(&self.quiver, &diff),
                        arity: 2,
                    });
                }
            }
        }
        Check::from_witnesses(
            "moment map",
            format!("{} vertices x {} generators", nv, self.quiver.arrows().len()),
            witnesses,
        )
    }

    /// The necklace bracket by the closed pairing formula: for every letter
    /// `a_i` of the first necklace and `b_j` of the second with
    /// `⟦a_i, b_j⟧ = c e ⊗ e'`, add `c` times the necklace
    /// `a_{i+1} … a_{i-1} b_{j+1} … b_{j-1}`. Requires an ungraded bracket whose
    /// generator values are multiples of idempotent pairs.
    pub fn necklace_bracket(&self, c1: &Cyclic, c2: &Cyclic) -> Result<Cyclic> {
        if self.degree != 0 || self.quiver.arrows().iter().any(|a| a.degree != 0) {
            return Err(Error::Unsupported("the necklace formula is for ungraded brackets".into()));
        }
        for v in self.table.values() {
            if v.keys().any(|k| !k[0].is_unit() || !k[1].is_unit()) {
                return Err(Error::Unsupported("the necklace formula needs idempotent-valued generator brackets".into()));
            }
        }
        let mut out = NC::zero();
        for (u, cu) in c1.terms().iter() {
            for (v, cv) in c2.terms().iter() {
                for (i, a) in u.letters().iter().enumerate() {
                    for (j, b) in v.letters().iter().enumerate() {
                        let value = self.gen_pair(a, b);
                        for (k, c) in value.iter() {
                            let rest_u = rest_of_necklace(u, i);
                            let rest_v = rest_of_necklace(v, j);
                            let word = rest_u
                                .mul(&k[1])
                                .and_then(|x| x.mul(&rest_v))
                                .and_then(|x| x.mul(&k[0]));
                            if let Some(w) = word {
                                out.add_term(w, cu * cv * c);
                            }
                        }
                    }
                }
            }
        }
        Ok(to_cyclic(&out))
    }

    /// Render a necklace witness.
    pub fn render_cyclic(&self, c: &Cyclic) -> String {
        render_cyclic(&self.quiver, c)
    }
}

/// `a_{i+1} … a_k a_1 … a_{i-1}` for a closed word, as a path from `t(a_i)` to `s(a_i)`.
fn rest_of_necklace(u: &Word, i: usize) -> Word {
    let rotated = u.rotate((i + 1) % u.len());
    let letters = &rotated.letters()[..u.len() - 1];
    if letters.is_empty() {
        Word::unit(u.letters()[i].target)
    } else {
        Word::from_letters(letters.to_vec()).expect("subpath of a closed word")
    }
}

/// The standard moment element `w = Σ_a (a a* - a* a)` over original arrows.
pub fn standard_moment(qbar: &Quiver) -> NC {
    let mut w = NC::zero();
    for id in qbar.arrows_of_kind(ArrowKind::Original) {
        let a = nc_letter(qbar.letter(id));
        let s = nc_letter(qbar.letter(qbar.dual(id).expect("doubled quiver")));
        w.add_assign(&crate::ncalg::nc_mul(&a, &s));
        w.sub_assign(&crate::ncalg::nc_mul(&s, &a));
    }
    w
}

/// The component `e_i w e_i` at every vertex.
pub fn moment_components(q: &Quiver, w: &NC) -> Vec<NC> {
    (0..q.num_vertices() as u32).map(|i| nc_block(w, i, i)).collect()
}

/// Compare the pairing formula with `to_cyclic ∘ {−,−}` on sampled necklaces.
pub fn check_necklace_oracle(spec: &DoubleBracketSpec, samples: usize, seed: u64, max_len: usize) -> Check {
    let mut s = Sampler::new(seed);
    let q = spec.quiver().clone();
    let mut pairs = Vec::new();
    while pairs.len() < samples {
        let x = to_cyclic(&s.closed_element(&q, max_len, 2));
        let y = to_cyclic(&s.closed_element(&q, max_len, 2));
        if !x.is_zero() && !y.is_zero() {
            pairs.push((x, y));
        }
    }
    let mut witnesses = Vec::new();
    let mut errors = Vec::new();
    for (x, y) in &pairs {
        match spec.necklace_bracket(x, y) {
            Ok(formula) => {
                let route = spec.cyclic_bracket(x, y);
                let diff = formula.sub(&route);
                if !diff.is_zero() {
                    witnesses.push(Witness {
                        input: format!("{{{}, {}}}", spec.render_cyclic(x), spec.render_cyclic(y)),
                        value: spec.render_cyclic(&diff),
                        arity: 1,
                    });
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    if let Some(e) = errors.first() {
        return Check::indeterminate("necklace formula vs Leibniz route", e.clone());
    }
    Check::from_witnesses("necklace formula vs Leibniz route", format!("{} necklace pairs", pairs.len()), witnesses)
}

/// Antisymmetry and Jacobi of the induced bracket on `A_♮`, on sampled necklaces.
pub fn check_necklace_lie(spec: &DoubleBracketSpec, samples: usize, seed: u64, max_len: usize) -> Check {
    let mut s = Sampler::new(seed);
    let q = spec.quiver().clone();
    let n = spec.degree();
    let mut witnesses = Vec::new();
    let mut count = 0;
    for _ in 0..samples {
        let words: Vec<Word> = (0..3).filter_map(|_| s.closed_word(&q, max_len)).collect();
        if words.len() < 3 {
            continue;
        }
        count += 1;
        let c: Vec<Cyclic> = words.iter().map(|w| to_cyclic(&nc_word(w.clone()))).collect();
        let d: Vec<i64> = words.iter().map(|w| w.degree() - n).collect();
        let br = |a: &Cyclic, b: &Cyclic| spec.cyclic_bracket(a, b);
        let anti = br(&c[0], &c[1]).add(&br(&c[1], &c[0]).scaled(&qs(sign_of(d[0] * d[1]))));
        if !anti.is_zero() {
            witnesses.push(Witness {
                input: format!("{{{0}, {1}}} + sign {{{1}, {0}}}", spec.render_cyclic(&c[0]), spec.render_cyclic(&c[1])),
                value: spec.render_cyclic(&anti),
                arity: 1,
            });
        }
        // {x,{y,z}} = {{x,y},z} + (-1)^{|𝔰ⁿx||𝔰ⁿy|} {y,{x,z}}
        let lhs = br(&c[0], &br(&c[1], &c[2]));
        let rhs = br(&br(&c[0], &c[1]), &c[2]).add(&br(&c[1], &br(&c[0], &c[2])).scaled(&qs(sign_of(d[0] * d[1]))));
        let jac = lhs.sub(&rhs);
        if !jac.is_zero() {
            witnesses.push(Witness {
                input: format!(
                    "Jacobi({}, {}, {})",
                    spec.render_cyclic(&c[0]),
                    spec.render_cyclic(&c[1]),
                    spec.render_cyclic(&c[2])
                ),
                value: spec.render_cyclic(&jac),
                arity: 1,
            });
        }
    }
    Check::from_witnesses("necklace Lie algebra", format!("{count} sampled triples"), witnesses)
}

/// The Loday identity `{x,{y,z}} = {{x,y},z} + (-1)^{|𝔰ⁿx||𝔰ⁿy|}{y,{x,z}}` in `A`
/// on sampled words.
pub fn check_loday_identity(spec: &DoubleBracketSpec, samples: usize, seed: u64, max_len: usize) -> Check {
    let mut s = Sampler::new(seed);
    let q = spec.quiver().clone();
    let n = spec.degree();
    let mut witnesses = Vec::new();
    for _ in 0..samples {
        let words: Vec<Word> = (0..3).filter_map(|_| s.word(&q, max_len)).collect();
        if words.len() < 3 {
            continue;
        }
        let x: Vec<NC> = words.iter().map(|w| nc_word(w.clone())).collect();
        let sxy = qs(sign_of((words[0].degree() - n) * (words[1].degree() - n)));
        let lhs = spec.loday(&x[0], &spec.loday(&x[1], &x[2]));
        let mut rhs = spec.loday(&spec.loday(&x[0], &x[1]), &x[2]);
        rhs.add_scaled(&spec.loday(&x[1], &spec.loday(&x[0], &x[2])), &sxy);
        let diff = &lhs - &rhs;
        if !diff.is_zero() {
            witnesses.push(Witness {
                input: format!(
                    "Loday({}, {}, {})",
                    render_nc(&q, &x[0]),
                    render_nc(&q, &x[1]),
                    render_nc(&q, &x[2])
                ),
                value: render_nc(&q, &diff),
                arity: 1,
            });
        }
    }
    Check::from_witnesses("Loday identity", format!("{samples} sampled triples"), witnesses)
}

/// Scalar helper for callers that build signed combinations.
pub fn sign_q(exponent: i64) -> Q {
    qs(sign_of(exponent))
}

/// `1` as a rational, re-exported for small call sites.
pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_nc, parse_tensor};
    fn jordan() -> DoubleBracketSpec {
        DoubleBracketSpec::standard(&Quiver::jordan().double(0).unwrap()).unwrap()
    }

    fn a3() -> DoubleBracketSpec {
        DoubleBracketSpec::standard(&Quiver::a3_framed().double(0).unwrap()).unwrap()
    }

    fn ev(spec: &DoubleBracketSpec, x: &str, y: &str) -> Tensor {
        let q = spec.quiver();
        spec.eval(&parse_nc(q, x).unwrap(), &parse_nc(q, y).unwrap())
    }

    fn t(spec: &DoubleBracketSpec, s: &str) -> Tensor {
        parse_tensor(spec.quiver(), s, 2).unwrap()
    }

    #[test]
    fn generator_values_and_idempotents() {
        let j = jordan();
        assert_eq!(ev(&j, "a", "a*"), t(&j, "e(0) # e(0)"));
        assert_eq!(ev(&j, "a*", "a"), t(&j, "-e(0) # e(0)"));
        assert!(ev(&j, "e(0)", "a").is_zero());
        assert!(ev(&j, "a", "a").is_zero());
    }

    #[test]
    fn frozen_word_values() {
        let j = jordan();
        assert_eq!(ev(&j, "a.a*", "a"), t(&j, "-e(0) # a"));
        assert_eq!(ev(&j, "a*.a", "a"), t(&j, "-a # e(0)"));
        assert_eq!(ev(&j, "a.a* - a*.a", "a"), t(&j, "a # e(0) - e(0) # a"));
        assert_eq!(j.loday(&parse_nc(j.quiver(), "a.a*").unwrap(), &parse_nc(j.quiver(), "a").unwrap()), parse_nc(j.quiver(), "-a").unwrap());
    }

    /// Oracle: the second-slot Leibniz rule checked directly on products.
    #[test]
    fn leibniz_in_both_slots() {
        let j = a3();
        let q = j.quiver().clone();
        let mut s = Sampler::new(3);
        for _ in 0..50 {
            let (x, v, w) = (s.word(&q, 3).unwrap(), s.word(&q, 3).unwrap(), s.word(&q, 3).unwrap());
            let Some(vw) = v.mul(&w) else { continue };
            let lhs = j.words(&x, &vw);
            let mut rhs = outer_right(&j.words(&x, &v), &w);
            rhs.add_scaled(&outer_left(&v, &j.words(&x, &w)), &one());
            assert_eq!(lhs, rhs);
            // First slot: ⟦vw, x⟧ = ⟦v, x⟧ * w + v * ⟦w, x⟧ with the inner action.
            let lhs = j.words(&vw, &x);
            let inner = |t: &Tensor, left: Option<&Word>, right: Option<&Word>| -> Tensor {
                t.map_keys(|k| {
                    let mut a = k[0].clone();
                    let mut b = k[1].clone();
                    if let Some(r) = right {
                        a = a.mul(r)?;
                    }
                    if let Some(l) = left {
                        b = l.mul(&b)?;
                    }
                    Some((vec![a, b], q_one()))
                })
            };
            let mut rhs = inner(&j.words(&v, &x), None, Some(&w));
            rhs.add_assign(&inner(&j.words(&w, &x), Some(&v), None));
            assert_eq!(lhs, rhs);
        }
    }

    fn q_one() -> Q {
        Q::one()
    }

    #[test]
    fn standard_brackets_are_double_poisson() {
        for spec in [jordan(), a3()] {
            assert!(spec.check_antisymmetry().passed());
            assert!(spec.check_jacobi_generators().passed());
            assert!(spec.check_jacobi_samples(40, 1, 3).passed());
        }
    }

    #[test]
    fn corrupted_table_fails() {
        let qb = Quiver::jordan().double(0).unwrap();
        let a = qb.arrow_id("a").unwrap();
        let s = qb.arrow_id("a*").unwrap();
        let bad = DoubleBracketSpec::build(qb.clone(), 0, vec![(a, s, parse_tensor(&qb, "a # e(0)", 2).unwrap())]).unwrap();
        assert!(bad.check_antisymmetry().passed());
        let jac = bad.check_jacobi_generators();
        assert!(!jac.passed());
        assert!(!jac.witnesses.is_empty());
        let both = DoubleBracketSpec::build(
            qb.clone(),
            0,
            vec![
                (a, s, parse_tensor(&qb, "e(0) # e(0)", 2).unwrap()),
                (s, a, parse_tensor(&qb, "e(0) # e(0)", 2).unwrap()),
            ],
        )
        .unwrap();
        let check = both.check_antisymmetry();
        assert!(!check.passed());
        assert!(!check.witnesses.is_empty());
        let symmetric_loop =
            DoubleBracketSpec::build(qb.clone(), 0, vec![(a, a, parse_tensor(&qb, "e(0) # e(0)", 2).unwrap())]).unwrap();
        assert!(!symmetric_loop.check_antisymmetry().passed());
    }

    #[test]
    fn a3_moment_components() {
        let spec = a3();
        let q = spec.quiver().clone();
        let w = standard_moment(&q);
        assert!(spec.check_moment(&w).passed());
        let comps = moment_components(&q, &w);
        let idx = |v: &str| q.vertex_index(v).unwrap() as usize;
        assert_eq!(comps[idx("0")], parse_nc(&q, "-a0*.a0 + a2.a2* + p.p*").unwrap());
        assert_eq!(comps[idx("1")], parse_nc(&q, "a0.a0* - a1*.a1").unwrap());
        assert_eq!(comps[idx("2")], parse_nc(&q, "a1.a1* - a2*.a2").unwrap());
        assert_eq!(comps[idx("inf")], parse_nc(&q, "-p*.p").unwrap());
        let wrong = parse_nc(&q, "p.p*").unwrap();
        assert!(!spec.check_moment(&wrong).passed());
    }

    #[test]
    fn necklace_formula_matches_leibniz_route() {
        for spec in [jordan(), a3()] {
            assert!(check_necklace_oracle(&spec, 30, 5, 5).passed());
            assert!(check_necklace_lie(&spec, 20, 6, 4).passed());
            assert!(check_loday_identity(&spec, 20, 7, 3).passed());
        }
    }

    #[test]
    fn necklace_example() {
        let j = jordan();
        let q = j.quiver();
        let x = to_cyclic(&parse_nc(q, "a").unwrap());
        let y = to_cyclic(&parse_nc(q, "a*").unwrap());
        // {a, a*} = class(e) = 0 in the necklace quotient.
        assert!(j.necklace_bracket(&x, &y).unwrap().is_zero());
        let y2 = to_cyclic(&parse_nc(q, "a*.a*").unwrap());
        assert_eq!(j.necklace_bracket(&x, &y2).unwrap(), to_cyclic(&parse_nc(q, "2 a*").unwrap()));
    }
}
