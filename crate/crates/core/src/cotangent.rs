//! The noncommutative cotangent algebra and Maurer–Cartan bivectors.
//!
//! For a path algebra `A` the cotangent algebra is the free path algebra on
//! the arrows of `A` together with one letter `D(x)` per arrow `x`, placed like
//! a reversed arrow `t(x) -> s(x)` and of degree `N - |x|`, where `N = n + 1`
//! is the degree of its double bracket. The only nonzero generator brackets
//! are `⟦D(x), x⟧ = e_{t(x)} ⊗ e_{s(x)}` and their antisymmetric partners.
//! Elements of the necklace quotient are polyvectors, graded by their number
//! of `D` letters (the weight).

use crate::dbracket::DoubleBracketSpec;
use crate::error::{Error, Result};
use crate::lin::{qf, Lin, Q};
use crate::ncalg::{nc_letter, tensor2, to_cyclic, Cyclic, Word, NC};
use crate::quiver::{Arrow, ArrowKind, Quiver};
use crate::report::{Check, Witness};

#[derive(Clone, Debug)]
pub struct CotangentAlgebra {
    base: Quiver,
    base_degree: i64,
    spec: DoubleBracketSpec,
    d_letters: Vec<u32>,
}

impl CotangentAlgebra {
    /// The cotangent algebra of the path algebra of `base`, whose double
    /// brackets have degree `base_degree` (zero for ordinary quivers).
    pub fn new(base: &Quiver, base_degree: i64) -> Result<CotangentAlgebra> {
        let big_n = base_degree + 1;
        let mut q = base.clone();
        let mut d_letters = Vec::new();
        for (id, a) in base.arrows().iter().enumerate() {
            let d = q.push_arrow(Arrow {
                name: format!("D({})", a.name),
                source: a.target,
                target: a.source,
                degree: big_n - a.degree,
                kind: ArrowKind::Cotangent,
                partner: Some(id as u32),
            })?;
            d_letters.push(d);
        }
        let mut entries = Vec::new();
        for (id, a) in base.arrows().iter().enumerate() {
            let value = tensor2(&Lin::basis(Word::unit(a.target)), &Lin::basis(Word::unit(a.source)));
            entries.push((d_letters[id], id as u32, value));
        }
        let spec = DoubleBracketSpec::build(q, big_n, entries)?;
        Ok(CotangentAlgebra { base: base.clone(), base_degree, spec, d_letters })
    }

    pub fn quiver(&self) -> &Quiver {
        self.spec.quiver()
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }

    /// The Schouten double bracket of the cotangent algebra.
    pub fn spec(&self) -> &DoubleBracketSpec {
        &self.spec
    }

    /// The letter `D(x)` for a base arrow `x`.
    pub fn d(&self, base_arrow: u32) -> u32 {
        self.d_letters[base_arrow as usize]
    }

    /// Number of `D` letters of a word.
    pub fn weight(&self, w: &Word) -> usize {
        w.letters().iter().filter(|l| self.quiver().arrow(l.id).kind == ArrowKind::Cotangent).count()
    }

    /// The Schouten bracket on polyvectors.
    pub fn schouten(&self, x: &Cyclic, y: &Cyclic) -> Cyclic {
        self.spec.cyclic_bracket(x, y)
    }

    /// The bivector `P = Σ_a -D(a) D(a*)` of a doubled quiver.
    pub fn standard_bivector(&self) -> Result<Cyclic> {
        if !self.base.is_doubled() {
            return Err(Error::InvalidQuiver("the standard bivector needs a doubled quiver".into()));
        }
        let mut p = NC::zero();
        for id in self.base.arrows_of_kind(ArrowKind::Original) {
            let star = self.base.dual(id).expect("doubled");
            let da = nc_letter(self.quiver().letter(self.d(id)));
            let ds = nc_letter(self.quiver().letter(self.d(star)));
            p.sub_assign(&crate::ncalg::nc_mul(&da, &ds));
        }
        Ok(to_cyclic(&p))
    }

    /// The residual `½ {P, P}`.
    pub fn mc_residual(&self, p: &Cyclic) -> Cyclic {
        self.schouten(p, p).scaled(&qf(1, 2))
    }

    /// The double bracket on the base encoded by a bivector:
    /// `⟦g, h⟧_P = ⟦{P, g}, h⟧` with `{P, g} = m⟦P, g⟧`.
    pub fn associated_bracket(&self, p: &Cyclic) -> Result<DoubleBracketSpec> {
        for w in p.terms().keys() {
            if self.weight(w) != 2 {
                return Err(Error::Unsupported("associated_bracket needs a weight-2 polyvector".into()));
            }
        }
        let lift = p.lift();
        let mut entries = Vec::new();
        for g in self.base.letters() {
            let pg = self.spec.loday(&lift, &nc_letter(g));
            for h in self.base.letters() {
                let value = self.spec.eval(&pg, &nc_letter(h));
                if value.keys().any(|k| k.iter().any(|w| self.weight(w) != 0)) {
                    return Err(Error::Unsupported("bivector does not pair to a bracket on the base".into()));
                }
                let value = value.map_keys(|k| {
                    Some((k.iter().map(|w| self.to_base(w)).collect::<Option<Vec<_>>>()?, Q::from_integer(1.into())))
                });
                if !value.is_zero() {
                    entries.push((g.id, h.id, value));
                }
            }
        }
        DoubleBracketSpec::build(self.base.clone(), self.base_degree, entries)
    }

    fn to_base(&self, w: &Word) -> Option<Word> {
        if w.is_unit() {
            return Some(Word::unit(w.source()));
        }
        Word::from_letters(w.letters().iter().map(|l| self.base.letter(l.id)).collect())
    }

    /// PASS when `½{P,P} = 0`.
    pub fn check_mc(&self, p: &Cyclic) -> Check {
        let r = self.mc_residual(p);
        let witnesses = if r.is_zero() {
            Vec::new()
        } else {
            vec![Witness {
                input: format!("1/2 {{P, P}} for P = {}", self.spec.render_cyclic(p)),
                value: self.spec.render_cyclic(&r),
                arity: 1,
            }]
        };
        Check::from_witnesses("Maurer-Cartan equation", format!("{} terms in P", p.terms().len()), witnesses)
    }

    /// Compare the bracket of `P` with a reference table on every generator pair.
    pub fn check_associated(&self, p: &Cyclic, reference: &DoubleBracketSpec) -> Check {
        let assoc = match self.associated_bracket(p) {
            Ok(a) => a,
            Err(e) => return Check::fail("associated bracket", e.to_string(), Vec::new()),
        };
        let mut witnesses = Vec::new();
        for g in self.base.letters() {
            for h in self.base.letters() {
                let diff = &assoc.gen_pair(&g, &h) - &reference.gen_pair(&g, &h);
                if !diff.is_zero() {
                    witnesses.push(Witness {
                        input: format!("<<{}, {}>>_P - <<{}, {}>>", self.base.arrow(g.id).name, self.base.arrow(h.id).name, self.base.arrow(g.id).name, self.base.arrow(h.id).name),
                        value: crate::expr::render_tensor(&self.base, &diff),
                        arity: 2,
                    });
                }
            }
        }
        Check::from_witnesses("associated bracket", format!("{} generator pairs", self.base.letters().len().pow(2)), witnesses)
    }
}
