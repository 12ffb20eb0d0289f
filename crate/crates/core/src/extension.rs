//! Poisson extensions by a formal variable.
//!
//! Given a double Poisson bracket on `A` and a double derivation `Θ` of degree
//! zero, the extension `A⟨t⟩` adjoins one loop `t(i)` of degree `n` at every
//! vertex with `⟦t_i, t_j⟧ = δ_ij (t_i ⊗ e_i - e_i ⊗ t_i)` and `⟦t, g⟧ = Θ(g)`
//! for `t = Σ_i t_i`; the summand `⟦t_i, g⟧` is the part of `Θ(g)` passing
//! through vertex `i`. On the necklace side, an NC derivation `ν` extends the
//! Lie algebra `A_♮` to `A_♮ ⊕ K t̄` with `{t̄, x̄} = ν(x)‾`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dbracket::DoubleBracketSpec;
use crate::error::{Error, Result};
use crate::expr::{parse_tensor, render_cyclic, render_nc, render_tensor};
use crate::hamred::Reduction;
use crate::lin::{Lin, Q};
use crate::ncalg::{
    nc_letter, nc_word, outer_left, outer_right, tensor2, tensor_mult, to_cyclic, Cyclic, Letter,
    Tensor, Word, NC,
};
use crate::quiver::{Arrow, ArrowKind, Quiver};
use crate::report::{Check, Witness};
use crate::sample::Sampler;
use crate::sign::sign_of;

fn qs(s: i64) -> Q {
    Q::from_integer(s.into())
}

/// A double derivation `A -> A ⊗ A` for the outer bimodule structure, given
/// on generators.
#[derive(Clone, Debug)]
pub struct DoubleDerivation {
    quiver: Quiver,
    degree: i64,
    table: BTreeMap<u32, Tensor>,
}

impl DoubleDerivation {
    pub fn new(quiver: &Quiver, degree: i64, entries: Vec<(u32, Tensor)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (g, value) in entries {
            let l = quiver.letter(g);
            for k in value.keys() {
                if k.len() != 2 || k[0].target() != l.target || k[1].source() != l.source || k[0].source() != k[1].target() {
                    return Err(Error::InvalidBracket(format!("value on `{}` is not located in e_t A (x) A e_s", quiver.arrow(g).name)));
                }
                if k[0].degree() + k[1].degree() != l.degree + degree {
                    return Err(Error::InvalidBracket(format!("value on `{}` has the wrong degree", quiver.arrow(g).name)));
                }
            }
            if !value.is_zero() {
                table.insert(g, value);
            }
        }
        Ok(DoubleDerivation { quiver: quiver.clone(), degree, table })
    }

    pub fn zero(quiver: &Quiver) -> Self {
        DoubleDerivation { quiver: quiver.clone(), degree: 0, table: BTreeMap::new() }
    }

    /// The inner double derivation `g ↦ g ⊗ e_{s(g)} - e_{t(g)} ⊗ g`.
    pub fn inner(quiver: &Quiver) -> Self {
        let entries = quiver
            .letters()
            .into_iter()
            .map(|l| {
                let g = nc_letter(l);
                let mut v = tensor2(&g, &Lin::basis(Word::unit(l.source)));
                v.sub_assign(&tensor2(&Lin::basis(Word::unit(l.target)), &g));
                (l.id, v)
            })
            .collect();
        Self::new(quiver, 0, entries).expect("inner derivation is well located")
    }

    /// Parse `{generator name: tensor expression}`.
    pub fn from_map(quiver: &Quiver, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut entries = Vec::new();
        for (name, value) in map {
            entries.push((quiver.arrow_id(name)?, parse_tensor(quiver, value, 2)?));
        }
        Self::new(quiver, 0, entries)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn on_letter(&self, l: &Letter) -> Tensor {
        self.table.get(&l.id).cloned().unwrap_or_default()
    }

    /// `Θ(b_1 … b_l) = Σ_j (-1)^{|Θ||b_{<j}|} b_{<j} Θ(b_j) b_{>j}`.
    pub fn apply_word(&self, w: &Word) -> Tensor {
        let mut out = Tensor::zero();
        let mut prefix_degree = 0;
        for (j, l) in w.letters().iter().enumerate() {
            let v = self.on_letter(l);
            if !v.is_zero() {
                let t = outer_right(&outer_left(&w.prefix(j), &v), &w.suffix(j + 1));
                out.add_scaled(&t, &qs(sign_of(self.degree * prefix_degree)));
            }
            prefix_degree += l.degree;
        }
        out
    }

    pub fn apply(&self, x: &NC) -> Tensor {
        x.map_linear(|w| self.apply_word(w))
    }

    /// The induced derivation `θ = m ∘ Θ` of `A`.
    pub fn induced(&self, x: &NC) -> NC {
        tensor_mult(&self.apply(x))
    }
}

/// `A⟨t⟩` with its extended double bracket.
#[derive(Clone, Debug)]
pub struct Extension {
    spec: DoubleBracketSpec,
    t_letters: Vec<u32>,
    base_arrows: usize,
}

fn relabel(value: &Tensor, big: &Quiver) -> Tensor {
    value.map_keys(|k| {
        let words: Option<Vec<Word>> = k
            .iter()
            .map(|w| {
                if w.is_unit() {
                    Some(Word::unit(w.source()))
                } else {
                    Word::from_letters(w.letters().iter().map(|l| big.letter(l.id)).collect())
                }
            })
            .collect();
        Some((words?, Q::one()))
    })
}

/// Extend a double Poisson bracket by `t` with `⟦t, -⟧ = Θ`.
pub fn extend_double(spec: &DoubleBracketSpec, theta: &DoubleDerivation) -> Result<Extension> {
    if theta.degree() != 0 {
        return Err(Error::Unsupported("the extension needs a derivation of degree 0".into()));
    }
    let n = spec.degree();
    let base = spec.quiver();
    let mut big = base.clone();
    let mut t_letters = Vec::new();
    for v in 0..base.num_vertices() as u32 {
        let id = big.push_arrow(Arrow {
            name: format!("t({})", base.vertex_name(v)),
            source: v,
            target: v,
            degree: n,
            kind: ArrowKind::Formal,
            partner: Some(v),
        })?;
        t_letters.push(id);
    }
    let mut entries: Vec<(u32, u32, Tensor)> =
        spec.table().iter().map(|((g, h), v)| (*g, *h, relabel(v, &big))).collect();
    for (v, &ti) in t_letters.iter().enumerate() {
        let tw = nc_letter(big.letter(ti));
        let e = Lin::basis(Word::unit(v as u32));
        let mut value = tensor2(&tw, &e);
        value.sub_assign(&tensor2(&e, &tw));
        entries.push((ti, ti, value));
        for g in base.letters() {
            let th = relabel(&theta.on_letter(&g), &big);
            let part = th.filter(|k| k[0].source() == v as u32);
            if !part.is_zero() {
                entries.push((ti, g.id, part));
            }
        }
    }
    let ext = DoubleBracketSpec::build(big, n, entries)?;
    Ok(Extension { spec: ext, t_letters, base_arrows: base.arrows().len() })
}

impl Extension {
    pub fn spec(&self) -> &DoubleBracketSpec {
        &self.spec
    }

    pub fn quiver(&self) -> &Quiver {
        self.spec.quiver()
    }

    pub fn t_letters(&self) -> &[u32] {
        &self.t_letters
    }

    pub fn base_arrow_count(&self) -> usize {
        self.base_arrows
    }

    /// `t = Σ_i t_i`.
    pub fn t(&self) -> NC {
        self.t_letters.iter().map(|&id| (Word::letter(self.quiver().letter(id)), Q::one())).collect()
    }

    /// Embed an element of the base algebra.
    pub fn embed(&self, x: &NC) -> NC {
        let q = self.quiver();
        x.map_keys(|w| {
            let w2 = if w.is_unit() {
                Word::unit(w.source())
            } else {
                Word::from_letters(w.letters().iter().map(|l| q.letter(l.id)).collect())?
            };
            Some((w2, Q::one()))
        })
    }

    /// `⟦t,t,g⟧`, `⟦t,t,t⟧` and `⟦t,g,h⟧` with `t = Σ t_i`.
    pub fn check_t_jacobi(&self) -> Check {
        let t = self.t();
        let gens: Vec<NC> = (0..self.base_arrows as u32).map(|g| nc_letter(self.quiver().letter(g))).collect();
        let mut witnesses = Vec::new();
        let mut push = |label: String, v: Tensor| {
            if !v.is_zero() {
                witnesses.push(Witness { input: label, value: render_tensor(self.quiver(), &v), arity: 3 });
            }
        };
        push("<<t, t, t>>".into(), self.spec.triple(&t, &t, &t));
        for g in &gens {
            let name = render_nc(self.quiver(), g);
            push(format!("<<t, t, {name}>>"), self.spec.triple(&t, &t, g));
            for h in &gens {
                push(format!("<<t, {name}, {}>>", render_nc(self.quiver(), h)), self.spec.triple(&t, g, h));
            }
        }
        Check::from_witnesses("extended Jacobi with t", format!("{} base generators", gens.len()), witnesses)
    }

    /// The derivation diagram: `class(θ(x)) = class({t, x})` for closed words `x`.
    pub fn check_derivation_diagram(&self, theta: &DoubleDerivation, samples: usize, seed: u64, max_len: usize) -> Check {
        let base = theta.quiver().clone();
        let mut s = Sampler::new(seed);
        let mut witnesses = Vec::new();
        let t = self.t();
        let mut count = 0;
        for _ in 0..samples {
            let Some(w) = s.closed_word(&base, max_len) else { continue };
            count += 1;
            let x = nc_word(w);
            let lhs = to_cyclic(&self.embed(&theta.induced(&x)));
            let rhs = to_cyclic(&self.spec.loday(&t, &self.embed(&x)));
            let back = to_cyclic(&self.spec.loday(&self.embed(&x), &t)).scaled(&-Q::one());
            for (label, other) in [("{t, x}", rhs), ("-{x, t}", back)] {
                let diff = lhs.sub(&other);
                if !diff.is_zero() {
                    witnesses.push(Witness {
                        input: format!("theta({}) - {label}", render_nc(&base, &x)),
                        value: render_cyclic(self.quiver(), &diff),
                        arity: 1,
                    });
                }
            }
        }
        Check::from_witnesses("theta route vs extension route", format!("{count} sampled closed words"), witnesses)
    }
}

/// The residual of the double Poisson derivation identity on a generator pair,
/// with the signs `κ1`, `κ2` as displayed:
/// `Θ(⟦a,b⟧')⊗⟦a,b⟧'' - (-1)^{κ1} Θ(b)'⊗⟦a,Θ(b)''⟧ - (-1)^{κ2} ⟦b,Θ(a)'⟧''⊗Θ(a)''⊗⟦b,Θ(a)'⟧'`.
pub fn derivation_residual(spec: &DoubleBracketSpec, theta: &DoubleDerivation, a: &Letter, b: &Letter) -> Tensor {
    let n = spec.degree();
    let dt = theta.degree();
    let (aw, bw) = (Word::letter(*a), Word::letter(*b));
    let mut lhs = Tensor::zero();
    for (k, c) in spec.words(&aw, &bw).iter() {
        for (k2, c2) in theta.apply_word(&k[0]).iter() {
            lhs.add_term(vec![k2[0].clone(), k2[1].clone(), k[1].clone()], c * c2);
        }
    }
    let mut rhs1 = Tensor::zero();
    for (k, c) in theta.on_letter(b).iter() {
        let (u, v) = (&k[0], &k[1]);
        let h_deg = a.degree + v.degree() - n;
        let kappa1 = dt * (a.degree - n) + u.degree() * v.degree() + u.degree() * h_deg;
        for (k2, c2) in spec.words(&aw, v).iter() {
            rhs1.add_term(vec![u.clone(), k2[0].clone(), k2[1].clone()], c * c2 * qs(sign_of(kappa1)));
        }
    }
    let mut rhs2 = Tensor::zero();
    for (k, c) in theta.on_letter(a).iter() {
        let (u, v) = (&k[0], &k[1]);
        for (k2, c2) in spec.words(&bw, u).iter() {
            let (h1, h2) = (&k2[0], &k2[1]);
            let kappa2 = (b.degree - n) * (dt - n - a.degree) + h1.degree() * (h2.degree() + v.degree()) + 1;
            // The factor triple is H' ⊗ H'' ⊗ Θ(a)'' rotated to H'' ⊗ Θ(a)'' ⊗ H'; the
            // rotation sign is the middle term of κ2.
            rhs2.add_term(vec![h2.clone(), v.clone(), h1.clone()], c * c2 * qs(sign_of(kappa2)));
        }
    }
    let mut out = lhs;
    out.sub_assign(&rhs1);
    out.sub_assign(&rhs2);
    out
}

/// The double Poisson derivation identity on every generator pair.
pub fn check_double_poisson_derivation(spec: &DoubleBracketSpec, theta: &DoubleDerivation) -> Check {
    let q = spec.quiver();
    let mut witnesses = Vec::new();
    for a in q.letters() {
        for b in q.letters() {
            let r = derivation_residual(spec, theta, &a, &b);
            if !r.is_zero() {
                witnesses.push(Witness {
                    input: format!("derivation identity on ({}, {})", q.arrow(a.id).name, q.arrow(b.id).name),
                    value: render_tensor(q, &r),
                    arity: 3,
                });
            }
        }
    }
    Check::from_witnesses("double Poisson derivation", format!("{} generator pairs", q.letters().len().pow(2)), witnesses)
}

/// Oracle for [`check_double_poisson_derivation`]: expand `⟦t, a, b⟧` directly
/// in the extension.
pub fn derivation_oracle(spec: &DoubleBracketSpec, theta: &DoubleDerivation) -> Result<Check> {
    let ext = extend_double(spec, theta)?;
    let t = ext.t();
    let q = spec.quiver();
    let mut witnesses = Vec::new();
    for a in q.letters() {
        for b in q.letters() {
            let v = ext.spec().triple(&t, &nc_letter(ext.quiver().letter(a.id)), &nc_letter(ext.quiver().letter(b.id)));
            if !v.is_zero() {
                witnesses.push(Witness {
                    input: format!("<<t, {}, {}>>", q.arrow(a.id).name, q.arrow(b.id).name),
                    value: render_tensor(ext.quiver(), &v),
                    arity: 3,
                });
            }
        }
    }
    Ok(Check::from_witnesses("double Poisson derivation (extension oracle)", format!("{} generator pairs", q.letters().len().pow(2)), witnesses))
}

/// `Θ(w) ∈ A ⊗ AwA + AwA ⊗ A`, decided by normal forms in both factors.
pub fn check_ideal_preservation(theta: &DoubleDerivation, red: &Reduction) -> Check {
    let q = red.host().clone();
    let mut witnesses = Vec::new();
    for (i, wi) in red.relations().iter().enumerate() {
        let t = theta.apply(wi);
        let mut projected = Tensor::zero();
        for (k, c) in t.iter() {
            let (Ok(a), Ok(b)) = (red.normal_form(&nc_word(k[0].clone())), red.normal_form(&nc_word(k[1].clone()))) else {
                return Check::indeterminate("Theta preserves the ideal", "tensor factor beyond the bound");
            };
            projected.add_scaled(&tensor2(&a, &b), c);
        }
        if !projected.is_zero() {
            witnesses.push(Witness {
                input: format!("Theta(w_{}) modulo the ideal", q.vertex_name(i as u32)),
                value: render_tensor(&q, &projected),
                arity: 2,
            });
        }
    }
    Check::from_witnesses("Theta preserves the ideal", format!("{} vertex relations", red.relations().len()), witnesses)
}

/// An element of `A_♮ ⊕ K t̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceT {
    pub necklace: Cyclic,
    pub t: Q,
}

/// The Lie algebra `A_♮ ⊕ K t̄` built from an NC Poisson bracket and an NC
/// derivation `ν` with `{t̄, x̄} = ν(x)‾` and `{t̄, t̄} = 0`.
pub struct NcExtension<'a> {
    spec: &'a DoubleBracketSpec,
    nu: Box<dyn Fn(&NC) -> NC + 'a>,
}

impl<'a> NcExtension<'a> {
    pub fn new(spec: &'a DoubleBracketSpec, nu: impl Fn(&NC) -> NC + 'a) -> Self {
        NcExtension { spec, nu: Box::new(nu) }
    }

    pub fn bracket(&self, x: &NecklaceT, y: &NecklaceT) -> NecklaceT {
        let mut necklace = self.spec.cyclic_bracket(&x.necklace, &y.necklace);
        if !x.t.is_zero() {
            necklace = necklace.add(&to_cyclic(&(self.nu)(&y.necklace.lift())).scaled(&x.t));
        }
        if !y.t.is_zero() {
            necklace = necklace.sub(&to_cyclic(&(self.nu)(&x.necklace.lift())).scaled(&y.t));
        }
        NecklaceT { necklace, t: Q::zero() }
    }

    /// `ν{x, y} = {ν x, y} + {x, ν y}` on sampled necklaces.
    pub fn check_poisson_derivation(&self, samples: usize, seed: u64, max_len: usize) -> Check {
        let q = self.spec.quiver().clone();
        let mut s = Sampler::new(seed);
        let mut witnesses = Vec::new();
        for _ in 0..samples {
            let x = to_cyclic(&s.closed_element(&q, max_len, 2));
            let y = to_cyclic(&s.closed_element(&q, max_len, 2));
            let nu_c = |c: &Cyclic| to_cyclic(&(self.nu)(&c.lift()));
            let lhs = nu_c(&self.spec.cyclic_bracket(&x, &y));
            let rhs = self.spec.cyclic_bracket(&nu_c(&x), &y).add(&self.spec.cyclic_bracket(&x, &nu_c(&y)));
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                witnesses.push(Witness {
                    input: format!("nu{{{0}, {1}}} - {{nu {0}, {1}}} - {{{0}, nu {1}}}", render_cyclic(&q, &x), render_cyclic(&q, &y)),
                    value: render_cyclic(&q, &diff),
                    arity: 1,
                });
            }
        }
        Check::from_witnesses("NC Poisson derivation", format!("{samples} sampled pairs"), witnesses)
    }

    /// Antisymmetry and Jacobi of `A_♮ ⊕ K t̄` on samples mixing `t̄`.
    pub fn check_lie(&self, samples: usize, seed: u64, max_len: usize) -> Check {
        let q = self.spec.quiver().clone();
        let mut s = Sampler::new(seed);
        let mut witnesses = Vec::new();
        let render = |x: &NecklaceT| format!("{} + {} tbar", render_cyclic(&q, &x.necklace), x.t);
        for _ in 0..samples {
            let els: Vec<NecklaceT> = (0..3)
                .map(|_| NecklaceT {
                    necklace: to_cyclic(&s.closed_element(&q, max_len, 2)),
                    t: crate::lin::q(s.coefficient()),
                })
                .collect();
            let add = |x: &NecklaceT, y: &NecklaceT| NecklaceT { necklace: x.necklace.add(&y.necklace), t: &x.t + &y.t };
            let neg = |x: &NecklaceT| NecklaceT { necklace: x.necklace.scaled(&-Q::one()), t: -x.t.clone() };
            let (x, y, z) = (&els[0], &els[1], &els[2]);
            let anti = add(&self.bracket(x, y), &self.bracket(y, x));
            let jac = add(
                &add(&self.bracket(x, &self.bracket(y, z)), &neg(&self.bracket(&self.bracket(x, y), z))),
                &neg(&self.bracket(y, &self.bracket(x, z))),
            );
            for (name, v) in [("antisymmetry", anti), ("Jacobi", jac)] {
                if !v.necklace.is_zero() || !v.t.is_zero() {
                    witnesses.push(Witness {
                        input: format!("{name}({}, {}, {})", render(x), render(y), render(z)),
                        value: render_cyclic(&q, &v.necklace),
                        arity: 1,
                    });
                }
            }
        }
        Check::from_witnesses("extended necklace Lie algebra", format!("{samples} sampled triples"), witnesses)
    }
}

/// The projection `A_♮ ⊕ K t̄ -> (A_w)_♮ ⊕ K t̄` is a Lie morphism, with
/// `{t̄, [x]‾} = [θ(x)]‾` downstairs.
pub fn check_reduced_extension_lie(
    spec: &DoubleBracketSpec,
    theta: &DoubleDerivation,
    red: &Reduction,
    samples: usize,
    seed: u64,
) -> Check {
    let name = "extended pr is a Lie morphism";
    let q = spec.quiver().clone();
    let up = NcExtension::new(spec, |x| theta.induced(x));
    let down = |x: &NecklaceT, y: &NecklaceT| -> Result<Cyclic> {
        let (rx, ry) = (red.reduce_cyclic(&x.necklace)?, red.reduce_cyclic(&y.necklace)?);
        let mut out = red.induced_lie(spec, &rx, &ry)?;
        out = out.add(&red.reduce_cyclic(&to_cyclic(&theta.induced(&ry.lift())))?.scaled(&x.t));
        out = out.sub(&red.reduce_cyclic(&to_cyclic(&theta.induced(&rx.lift())))?.scaled(&y.t));
        Ok(out)
    };
    let mut s = Sampler::new(seed);
    let max = (red.bound() + 2) / 2;
    let mut witnesses = Vec::new();
    let mut done = 0;
    for _ in 0..samples {
        let draw = |s: &mut Sampler| NecklaceT {
            necklace: to_cyclic(&s.closed_element(&q, max.max(1), 2)),
            t: crate::lin::q(s.coefficient()),
        };
        let (x, y) = (draw(&mut s), draw(&mut s));
        let lhs = red.reduce_cyclic(&up.bracket(&x, &y).necklace);
        let rhs = down(&x, &y);
        let (lhs, rhs) = match (lhs, rhs) {
            (Ok(l), Ok(r)) => (l, r),
            _ => continue,
        };
        done += 1;
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            witnesses.push(Witness {
                input: format!(
                    "pr{{X, Y}} - {{pr X, pr Y}} at X = {} + {} tbar, Y = {} + {} tbar",
                    render_cyclic(&q, &x.necklace),
                    x.t,
                    render_cyclic(&q, &y.necklace),
                    y.t
                ),
                value: render_cyclic(&q, &diff),
                arity: 1,
            });
        }
    }
    if done == 0 {
        return Check::indeterminate(name, "no sampled pair fits the truncation bound");
    }
    Check::from_witnesses(name, format!("{done} sampled pairs within the truncation bound"), witnesses)
}

/// Compare the NC extension with the double route on mixed brackets `{t̄, x̄}`.
pub fn check_nc_vs_double(ext: &Extension, theta: &DoubleDerivation, samples: usize, seed: u64, max_len: usize) -> Check {
    let base_spec_quiver = theta.quiver().clone();
    let mut s = Sampler::new(seed);
    let mut witnesses = Vec::new();
    for _ in 0..samples {
        let x = to_cyclic(&s.closed_element(&base_spec_quiver, max_len, 2));
        let nc_route = to_cyclic(&ext.embed(&theta.induced(&x.lift())));
        let double_route = ext.spec().cyclic_bracket(&to_cyclic(&ext.t()), &to_cyclic(&ext.embed(&x.lift())));
        let diff = nc_route.sub(&double_route);
        if !diff.is_zero() {
            witnesses.push(Witness {
                input: format!("{{tbar, {}}}", render_cyclic(&base_spec_quiver, &x)),
                value: render_cyclic(ext.quiver(), &diff),
                arity: 1,
            });
        }
    }
    Check::from_witnesses("NC extension vs double extension", format!("{samples} sampled necklaces"), witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbracket::standard_moment;
    use crate::expr::parse_nc;

    fn jordan() -> DoubleBracketSpec {
        DoubleBracketSpec::standard(&Quiver::jordan().double(0).unwrap()).unwrap()
    }

    fn half_inner(spec: &DoubleBracketSpec) -> DoubleDerivation {
        let q = spec.quiver();
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "e(0) # a".to_string());
        m.insert("a*".to_string(), "-a* # e(0)".to_string());
        DoubleDerivation::from_map(q, &m).unwrap()
    }

    #[test]
    fn extensions_are_double_poisson() {
        for spec in [jordan(), DoubleBracketSpec::standard(&Quiver::a3_framed().double(0).unwrap()).unwrap()] {
            for theta in [DoubleDerivation::zero(spec.quiver()), DoubleDerivation::inner(spec.quiver())] {
                let ext = extend_double(&spec, &theta).unwrap();
                assert!(ext.spec().check_antisymmetry().passed());
                let j = ext.spec().check_jacobi_generators();
                assert!(j.passed(), "{:?}", j.witnesses.first());
                assert!(ext.check_t_jacobi().passed());
                assert!(ext.check_derivation_diagram(&theta, 30, 1, 4).passed());
                assert!(check_double_poisson_derivation(&spec, &theta).passed());
            }
        }
    }

    #[test]
    fn inner_derivation_is_the_moment_bracket() {
        let spec = DoubleBracketSpec::standard(&Quiver::a3_framed().double(0).unwrap()).unwrap();
        let q = spec.quiver().clone();
        let w = standard_moment(&q);
        let inner = DoubleDerivation::inner(&q);
        for g in q.letters() {
            assert_eq!(inner.on_letter(&g), spec.eval(&w, &nc_letter(g)));
        }
        assert!(inner.induced(&parse_nc(&q, "a0.a0*").unwrap()).is_zero());
    }

    /// The displayed identity and the direct triple expansion agree term by term.
    #[test]
    fn residual_equals_triple_bracket() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let mut thetas = vec![half_inner(&spec), DoubleDerivation::inner(&q)];
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "a # a - e(0) # a.a".to_string());
        m.insert("a*".to_string(), "a* # e(0)".to_string());
        thetas.push(DoubleDerivation::from_map(&q, &m).unwrap());
        for theta in thetas {
            let ext = extend_double(&spec, &theta).unwrap();
            let t = ext.t();
            for a in q.letters() {
                for b in q.letters() {
                    let direct = ext.spec().triple(&t, &nc_letter(a), &nc_letter(b));
                    assert_eq!(derivation_residual(&spec, &theta, &a, &b), direct);
                }
            }
            assert_eq!(
                check_double_poisson_derivation(&spec, &theta).passed(),
                derivation_oracle(&spec, &theta).unwrap().passed()
            );
        }
    }

    #[test]
    fn half_inner_derivation() {
        let spec = jordan();
        let theta = half_inner(&spec);
        assert!(check_double_poisson_derivation(&spec, &theta).passed());
        assert!(derivation_oracle(&spec, &theta).unwrap().passed());
        let q = spec.quiver().clone();
        assert_eq!(theta.induced(&parse_nc(&q, "a.a.a*").unwrap()), parse_nc(&q, "a.a.a*").unwrap());
        let red = Reduction::new(&q, &standard_moment(&q), None, 6).unwrap();
        assert!(!check_ideal_preservation(&theta, &red).passed());
        assert!(check_ideal_preservation(&DoubleDerivation::inner(&q), &red).passed());
        let ext = extend_double(&spec, &theta).unwrap();
        assert!(ext.check_derivation_diagram(&theta, 50, 2, 4).passed());
        assert!(check_nc_vs_double(&ext, &theta, 30, 3, 4).passed());
        let nc = NcExtension::new(&spec, |x| theta.induced(x));
        assert!(nc.check_poisson_derivation(30, 4, 4).passed());
        assert!(nc.check_lie(30, 5, 3).passed());
    }

    #[test]
    fn extended_projection_descends() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let red = Reduction::new(&q, &standard_moment(&q), None, 6).unwrap();
        for theta in [DoubleDerivation::zero(&q), DoubleDerivation::inner(&q)] {
            let c = check_reduced_extension_lie(&spec, &theta, &red, 60, 7);
            assert!(c.passed(), "{c:?}");
        }
    }

    /// Necklaces in which `t` sits between other letters do not descend: the
    /// ideal is not closed under the bracket of the whole double extension.
    #[test]
    fn mixed_t_necklaces_do_not_descend() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let ext = extend_double(&spec, &DoubleDerivation::inner(&q)).unwrap();
        let eq = ext.quiver().clone();
        let red = Reduction::new(&eq, &ext.embed(&standard_moment(&q)), None, 6).unwrap();
        let x = to_cyclic(&parse_nc(&eq, "a*.t(0)").unwrap());
        let wq = to_cyclic(&parse_nc(&eq, "a.a*.a*.t(0) - a*.a.a*.t(0)").unwrap());
        assert!(red.reduce_cyclic(&wq).unwrap().is_zero());
        let b = red.reduce_cyclic(&ext.spec().cyclic_bracket(&x, &wq)).unwrap();
        assert_eq!(render_cyclic(&eq, &b), "-a*.a*.t(0).t(0) + a*.t(0).a*.t(0)");
    }

    #[test]
    fn unit_derivation_leaves_the_ideal() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "e(0) # e(0)".to_string());
        let theta = DoubleDerivation::from_map(&q, &m).unwrap();
        let red = Reduction::new(&q, &standard_moment(&q), None, 4).unwrap();
        let c = check_ideal_preservation(&theta, &red);
        assert!(!c.passed());
        assert_eq!(c.witnesses[0].value, "e(0) # a* - a* # e(0)");
    }

    #[test]
    fn polynomial_ring_in_t() {
        let q = Quiver::new(["0"]).unwrap();
        let spec = DoubleBracketSpec::build(q.clone(), 0, vec![]).unwrap();
        let ext = extend_double(&spec, &DoubleDerivation::zero(&q)).unwrap();
        let t = ext.t();
        assert_eq!(render_tensor(ext.quiver(), &ext.spec().eval(&t, &t)), "-e(0) # t(0) + t(0) # e(0)");
        assert!(ext.spec().check_jacobi_generators().passed());
        let tt = nc_mul_t(&t);
        assert!(ext.spec().triple(&tt, &t, &tt).is_zero());
    }

    fn nc_mul_t(t: &NC) -> NC {
        crate::ncalg::nc_mul(t, t)
    }

    #[test]
    fn a_non_poisson_derivation_is_detected() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "a # a - e(0) # a.a".to_string());
        let theta = DoubleDerivation::from_map(&q, &m).unwrap();
        assert!(!check_double_poisson_derivation(&spec, &theta).passed());
        assert!(!derivation_oracle(&spec, &theta).unwrap().passed());
    }
}
