//! Representation schemes at a dimension vector.
//!
//! A generator `g` becomes a `d_{t(g)} × d_{s(g)}` matrix of indeterminates
//! `g[i,j]` and a word becomes the product of its letter matrices, so
//! `ρ(uv) = ρ(u) ρ(v)`. A double bracket induces the Poisson bracket
//! `{a[i,j], b[u,v]} = ⟦a,b⟧'[u,j] ⟦a,b⟧''[i,v]` on coordinates. Traces of
//! closed words land in the invariant functions, and the cube compares the
//! necklace, extension and reduction routes against their traces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dbracket::{moment_components, DoubleBracketSpec};
use crate::error::{Error, Result};
use crate::expr::{render_cyclic, render_nc};
use crate::extension::{check_ideal_preservation, extend_double, DoubleDerivation, Extension, NcExtension, NecklaceT};
use crate::hamred::Reduction;
use crate::lin::{q, Lin, Q};
use crate::linalg::Echelon;
use crate::ncalg::{nc_word, to_cyclic, Cyclic, Letter, Tensor, Word, NC};
use crate::quiver::Quiver;
use crate::report::{Check, Report, Witness};
use crate::sample::Sampler;

/// A matrix coefficient `g[row, col]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub gen: u32,
    pub row: usize,
    pub col: usize,
    pub odd: bool,
}

/// A graded-commutative monomial: sorted variables, odd ones at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![v])
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Product with the Koszul sign of sorting odd variables, or `None` when an
    /// odd variable repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, i64)> {
        let mut sign = 1;
        for r in other.0.iter().filter(|r| r.odd) {
            let mut later = 0;
            for l in self.0.iter().filter(|l| l.odd) {
                if l == r {
                    return None;
                }
                if l > r {
                    later += 1;
                }
            }
            if later % 2 == 1 {
                sign = -sign;
            }
        }
        let mut vars = self.0.clone();
        vars.extend_from_slice(&other.0);
        vars.sort();
        Some((Monomial(vars), sign))
    }
}

pub type Poly = Lin<Monomial>;

pub fn poly_const(c: Q) -> Poly {
    Poly::term(Monomial::one(), c)
}

pub fn poly_var(v: Var) -> Poly {
    Poly::basis(Monomial::var(v))
}

pub fn poly_mul(f: &Poly, g: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m1, c1) in f.iter() {
        for (m2, c2) in g.iter() {
            if let Some((m, s)) = m1.mul(m2) {
                out.add_term(m, c1 * c2 * q(s));
            }
        }
    }
    out
}

/// `∂f/∂x` for an even variable `x`.
pub fn poly_partial(f: &Poly, x: &Var) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in f.iter() {
        let k = m.0.iter().filter(|v| *v == x).count();
        if k > 0 {
            let mut vars = m.0.clone();
            let pos = vars.iter().position(|v| v == x).expect("present");
            vars.remove(pos);
            out.add_term(Monomial(vars), c * q(k as i64));
        }
    }
    out
}

pub fn poly_vars(f: &Poly) -> Vec<Var> {
    let mut vs: Vec<Var> = f.keys().flat_map(|m| m.0.iter().copied()).collect();
    vs.sort();
    vs.dedup();
    vs
}

/// The homogeneous components of `f` by total degree.
pub fn poly_components(f: &Poly) -> BTreeMap<usize, Poly> {
    let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
    for (m, c) in f.iter() {
        out.entry(m.degree()).or_default().add_term(m.clone(), c.clone());
    }
    out
}

/// A dense matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = poly_const(Q::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    acc.add_assign(&poly_mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Matrix, c: &Q) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, c);
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Poly {
        let mut acc = Poly::zero();
        for i in 0..self.rows.min(self.cols) {
            acc.add_assign(self.get(i, i));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }
}

/// Functions on the representation scheme of a quiver algebra at `d`.
#[derive(Clone, Debug)]
pub struct RepScheme {
    quiver: Quiver,
    dims: Vec<usize>,
}

impl RepScheme {
    pub fn new(quiver: &Quiver, dims: &[usize]) -> Result<RepScheme> {
        if dims.len() != quiver.num_vertices() {
            return Err(Error::InvalidQuiver(format!(
                "dimension vector has {} entries for {} vertices",
                dims.len(),
                quiver.num_vertices()
            )));
        }
        Ok(RepScheme { quiver: quiver.clone(), dims: dims.to_vec() })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn var(&self, gen: u32, row: usize, col: usize) -> Var {
        let l = self.quiver.letter(gen);
        Var { gen, row, col, odd: l.degree.rem_euclid(2) == 1 }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for l in self.quiver.letters() {
            for i in 0..self.dims[l.target as usize] {
                for j in 0..self.dims[l.source as usize] {
                    out.push(self.var(l.id, i, j));
                }
            }
        }
        out
    }

    pub fn letter_matrix(&self, l: &Letter) -> Matrix {
        let (r, c) = (self.dims[l.target as usize], self.dims[l.source as usize]);
        let mut m = Matrix::zero(r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, poly_var(self.var(l.id, i, j)));
            }
        }
        m
    }

    pub fn word_matrix(&self, w: &Word) -> Matrix {
        let mut m = Matrix::identity(self.dims[w.target() as usize]);
        for l in w.letters() {
            m = m.mul(&self.letter_matrix(l));
        }
        m
    }

    /// `ρ(x)` for an element whose words all lie in `e_target A e_source`.
    pub fn matrix(&self, x: &NC, target: u32, source: u32) -> Matrix {
        let mut m = Matrix::zero(self.dims[target as usize], self.dims[source as usize]);
        for (w, c) in x.iter() {
            if w.target() == target && w.source() == source {
                m.add_scaled(&self.word_matrix(w), c);
            }
        }
        m
    }

    pub fn trace(&self, x: &NC) -> Poly {
        let mut acc = Poly::zero();
        for (w, c) in x.iter() {
            if w.is_closed() {
                acc.add_scaled(&self.word_matrix(w).trace(), c);
            }
        }
        acc
    }

    pub fn trace_cyclic(&self, c: &Cyclic) -> Poly {
        self.trace(&c.lift())
    }

    /// Per vertex `i`, the matrix `M` with `M[j][k] = ρ(w_i)[k][j]`, i.e. the
    /// value of the comoment on `ε^{(i)}_{jk}`.
    pub fn moment_matrix(&self, w: &NC) -> Vec<Matrix> {
        moment_components(&self.quiver, w)
            .iter()
            .enumerate()
            .map(|(i, wi)| self.matrix(wi, i as u32, i as u32).transpose())
            .collect()
    }

    pub fn render_var(&self, v: &Var) -> String {
        format!("{}[{},{}]", self.quiver.arrow(v.gen).name, v.row + 1, v.col + 1)
    }

    pub fn render(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in f.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let mut i = 0;
            while i < m.0.len() {
                let mut j = i;
                while j < m.0.len() && m.0[j] == m.0[i] {
                    j += 1;
                }
                let name = self.render_var(&m.0[i]);
                factors.push(if j - i > 1 { format!("{name}^{}", j - i) } else { name });
                i = j;
            }
            let body = factors.join(" ");
            if body.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{abs} {body}"));
            }
        }
        out
    }
}

/// The Poisson bracket on a representation scheme induced by a double bracket.
#[derive(Clone, Debug)]
pub struct RepBracket {
    scheme: RepScheme,
    table: BTreeMap<(Var, Var), Poly>,
}

impl RepBracket {
    pub fn new(spec: &DoubleBracketSpec, scheme: &RepScheme) -> Result<RepBracket> {
        if spec.quiver().arrows().len() != scheme.quiver().arrows().len() {
            return Err(Error::InvalidQuiver("bracket and scheme use different quivers".into()));
        }
        if spec.degree() % 2 != 0 || scheme.quiver().letters().iter().any(|l| l.degree % 2 != 0) {
            return Err(Error::Unsupported("representation brackets are implemented for even degrees only".into()));
        }
        let mut table = BTreeMap::new();
        let letters = scheme.quiver().letters();
        for a in &letters {
            for b in &letters {
                let t = spec.gen_pair(a, b);
                if t.is_zero() {
                    continue;
                }
                let parts: Vec<(Matrix, Matrix, Q)> = t
                    .iter()
                    .map(|(k, c)| (scheme.word_matrix(&k[0]), scheme.word_matrix(&k[1]), c.clone()))
                    .collect();
                let (da_t, da_s) = (scheme.dims[a.target as usize], scheme.dims[a.source as usize]);
                let (db_t, db_s) = (scheme.dims[b.target as usize], scheme.dims[b.source as usize]);
                for i in 0..da_t {
                    for j in 0..da_s {
                        for u in 0..db_t {
                            for v in 0..db_s {
                                let mut acc = Poly::zero();
                                for (m1, m2, c) in &parts {
                                    acc.add_scaled(&poly_mul(m1.get(u, j), m2.get(i, v)), c);
                                }
                                if !acc.is_zero() {
                                    table.insert((scheme.var(a.id, i, j), scheme.var(b.id, u, v)), acc);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(RepBracket { scheme: scheme.clone(), table })
    }

    pub fn scheme(&self) -> &RepScheme {
        &self.scheme
    }

    pub fn var_bracket(&self, x: &Var, y: &Var) -> Poly {
        self.table.get(&(*x, *y)).cloned().unwrap_or_default()
    }

    /// `{f, g} = Σ ∂f/∂x ∂g/∂y {x, y}`.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let (vf, vg) = (poly_vars(f), poly_vars(g));
        let dg: Vec<(Var, Poly)> = vg.iter().map(|y| (*y, poly_partial(g, y))).collect();
        let mut out = Poly::zero();
        for x in &vf {
            let dfx = poly_partial(f, x);
            for (y, dgy) in &dg {
                let b = self.var_bracket(x, y);
                if !b.is_zero() {
                    out.add_assign(&poly_mul(&poly_mul(&dfx, dgy), &b));
                }
            }
        }
        out
    }

    fn jacobi(&self, x: &Poly, y: &Poly, z: &Poly) -> Poly {
        let mut j = self.bracket(x, &self.bracket(y, z));
        j.add_assign(&self.bracket(y, &self.bracket(z, x)));
        j.add_assign(&self.bracket(z, &self.bracket(x, y)));
        j
    }

    /// Antisymmetry and Jacobi on every pair and triple of coordinates.
    pub fn check_jacobi_exhaustive(&self) -> Check {
        let vars = self.scheme.variables();
        let polys: Vec<Poly> = vars.iter().map(|v| poly_var(*v)).collect();
        let mut witnesses = Vec::new();
        let s = &self.scheme;
        for (i, x) in polys.iter().enumerate() {
            for (j, y) in polys.iter().enumerate() {
                let mut anti = self.bracket(x, y);
                anti.add_assign(&self.bracket(y, x));
                if !anti.is_zero() {
                    witnesses.push(Witness {
                        input: format!("{{{0}, {1}}} + {{{1}, {0}}}", s.render_var(&vars[i]), s.render_var(&vars[j])),
                        value: s.render(&anti),
                        arity: 0,
                    });
                }
                for (k, z) in polys.iter().enumerate().skip(j) {
                    if j < i {
                        continue;
                    }
                    let jac = self.jacobi(x, y, z);
                    if !jac.is_zero() {
                        witnesses.push(Witness {
                            input: format!(
                                "Jacobi({}, {}, {})",
                                s.render_var(&vars[i]),
                                s.render_var(&vars[j]),
                                s.render_var(&vars[k])
                            ),
                            value: s.render(&jac),
                            arity: 0,
                        });
                    }
                }
            }
        }
        let n = vars.len();
        Check::from_witnesses("representation Jacobi (exhaustive)", format!("{n} coordinates, all pairs and triples"), witnesses)
    }

    /// Jacobi on sampled triples of coordinates.
    pub fn check_jacobi_samples(&self, samples: usize, seed: u64) -> Check {
        let vars = self.scheme.variables();
        let mut s = Sampler::new(seed);
        let mut witnesses = Vec::new();
        for _ in 0..samples {
            let pick: Vec<Var> = (0..3).map(|_| *s.choose(&vars).expect("variables")).collect();
            let jac = self.jacobi(&poly_var(pick[0]), &poly_var(pick[1]), &poly_var(pick[2]));
            if !jac.is_zero() {
                let r = &self.scheme;
                witnesses.push(Witness {
                    input: format!("Jacobi({}, {}, {})", r.render_var(&pick[0]), r.render_var(&pick[1]), r.render_var(&pick[2])),
                    value: r.render(&jac),
                    arity: 0,
                });
            }
        }
        Check::from_witnesses("representation Jacobi (sampled)", format!("{samples} sampled coordinate triples"), witnesses)
    }

    /// `{a*[i,j], a[u,v]} = -δ_uj δ_iv`, `{a[i,j], a*[u,v]} = δ_uj δ_iv` and
    /// vanishing brackets of equal generators, for a dual pair of loops.
    pub fn check_dual_pairing(&self, a: u32, a_star: u32) -> Check {
        let s = &self.scheme;
        let l = s.quiver().letter(a);
        let (r, c) = (s.dims[l.target as usize], s.dims[l.source as usize]);
        let mut witnesses = Vec::new();
        let mut count = 0;
        for (x, y, sign) in [(a_star, a, -1), (a, a_star, 1), (a, a, 0), (a_star, a_star, 0)] {
            let (xr, xc) = if x == a { (r, c) } else { (c, r) };
            let (yr, yc) = if y == a { (r, c) } else { (c, r) };
            for i in 0..xr {
                for j in 0..xc {
                    for u in 0..yr {
                        for v in 0..yc {
                            count += 1;
                            let (vx, vy) = (s.var(x, i, j), s.var(y, u, v));
                            let got = self.bracket(&poly_var(vx), &poly_var(vy));
                            let delta = if u == j && i == v { sign } else { 0 };
                            let expected = poly_const(q(delta));
                            if got != expected {
                                witnesses.push(Witness {
                                    input: format!("{{{}, {}}} - ({delta})", s.render_var(&vx), s.render_var(&vy)),
                                    value: s.render(&(&got - &expected)),
                                    arity: 0,
                                });
                            }
                        }
                    }
                }
            }
        }
        Check::from_witnesses("dual coordinate pairing", format!("{count} coordinate pairs"), witnesses)
    }
}

/// `{Tr x, Tr y} = Tr {x, y}` on sampled closed elements.
pub fn check_trace_lie_morphism(spec: &DoubleBracketSpec, rb: &RepBracket, samples: usize, seed: u64, max_len: usize) -> Check {
    let q = spec.quiver().clone();
    let scheme = rb.scheme();
    let mut s = Sampler::new(seed);
    let mut witnesses = Vec::new();
    for _ in 0..samples {
        let x = s.closed_word(&q, max_len).map(nc_word).unwrap_or_default();
        let y = s.closed_word(&q, max_len).map(nc_word).unwrap_or_default();
        let lhs = rb.bracket(&scheme.trace(&x), &scheme.trace(&y));
        let rhs = scheme.trace(&spec.loday(&x, &y));
        if lhs != rhs {
            witnesses.push(Witness {
                input: format!("{{Tr {0}, Tr {1}}} - Tr {{{0}, {1}}}", render_nc(&q, &x), render_nc(&q, &y)),
                value: scheme.render(&(&lhs - &rhs)),
                arity: 0,
            });
        }
    }
    Check::from_witnesses("trace is a Lie morphism", format!("{samples} sampled pairs of closed words up to length {max_len}"), witnesses)
}

/// `{x[i,j], y[u,v]} = ⟦x,y⟧'[u,j] ⟦x,y⟧''[i,v]` for sampled words `x`, `y`.
pub fn check_matrix_formula(spec: &DoubleBracketSpec, rb: &RepBracket, samples: usize, seed: u64, max_len: usize) -> Check {
    let q = spec.quiver().clone();
    let scheme = rb.scheme();
    let mut s = Sampler::new(seed);
    let mut witnesses = Vec::new();
    for _ in 0..samples {
        let (Some(x), Some(y)) = (s.word(&q, max_len), s.word(&q, max_len)) else { continue };
        let (mx, my) = (scheme.word_matrix(&x), scheme.word_matrix(&y));
        let t: Tensor = spec.words(&x, &y);
        let parts: Vec<(Matrix, Matrix, Q)> =
            t.iter().map(|(k, c)| (scheme.word_matrix(&k[0]), scheme.word_matrix(&k[1]), c.clone())).collect();
        for i in 0..mx.rows() {
            for j in 0..mx.cols() {
                for u in 0..my.rows() {
                    for v in 0..my.cols() {
                        let lhs = rb.bracket(mx.get(i, j), my.get(u, v));
                        let mut rhs = Poly::zero();
                        for (m1, m2, c) in &parts {
                            rhs.add_scaled(&poly_mul(m1.get(u, j), m2.get(i, v)), c);
                        }
                        if lhs != rhs {
                            witnesses.push(Witness {
                                input: format!(
                                    "{{{}[{},{}], {}[{},{}]}}",
                                    render_nc(&q, &nc_word(x.clone())),
                                    i + 1,
                                    j + 1,
                                    render_nc(&q, &nc_word(y.clone())),
                                    u + 1,
                                    v + 1
                                ),
                                value: scheme.render(&(&lhs - &rhs)),
                                arity: 0,
                            });
                        }
                    }
                }
            }
        }
    }
    Check::from_witnesses("matrix coefficient formula", format!("{samples} sampled word pairs"), witnesses)
}

/// `{μ(ε^{(i)}_{jk}), g[u,v]}` agrees with the coordinate formula applied to
/// `g ⊗ e_i - e_i ⊗ g`.
pub fn check_moment_property(rb: &RepBracket, w: &NC) -> Check {
    let scheme = rb.scheme();
    let q = scheme.quiver().clone();
    let mu = scheme.moment_matrix(w);
    let mut witnesses = Vec::new();
    for (i, m) in mu.iter().enumerate() {
        let di = scheme.dims[i];
        for g in q.letters() {
            let (gr, gc) = (scheme.dims[g.target as usize], scheme.dims[g.source as usize]);
            for j in 0..di {
                for k in 0..di {
                    for u in 0..gr {
                        for v in 0..gc {
                            let got = rb.bracket(m.get(j, k), &poly_var(scheme.var(g.id, u, v)));
                            // x = w_i with x[k,j] = μ(ε_{jk}); formula with ⟦w_i, g⟧ = g ⊗ e_i - e_i ⊗ g.
                            let mut expected = Poly::zero();
                            if g.source as usize == i && k == v {
                                expected.add_assign(&poly_var(scheme.var(g.id, u, j)));
                            }
                            if g.target as usize == i && u == j {
                                expected.sub_assign(&poly_var(scheme.var(g.id, k, v)));
                            }
                            if got != expected {
                                witnesses.push(Witness {
                                    input: format!(
                                        "{{mu(eps^({})_{}{}), {}}}",
                                        q.vertex_name(i as u32),
                                        j + 1,
                                        k + 1,
                                        scheme.render_var(&scheme.var(g.id, u, v))
                                    ),
                                    value: scheme.render(&(&got - &expected)),
                                    arity: 0,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Check::from_witnesses("moment map on the representation scheme", format!("{} vertices", mu.len()), witnesses)
}

/// The ideal generated by homogeneous polynomials, decided degree by degree.
#[derive(Clone, Debug)]
pub struct PolyIdeal {
    bound: usize,
    slices: BTreeMap<usize, Echelon<Monomial>>,
}

fn monomials_of_degree(vars: &[Var], degree: usize) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &out {
            let start = m.last().map(|l| vars.iter().position(|v| v == l).expect("var")).unwrap_or(0);
            for v in &vars[start..] {
                if v.odd && m.last() == Some(v) {
                    continue;
                }
                let mut m2 = m.clone();
                m2.push(*v);
                next.push(m2);
            }
        }
        out = next;
    }
    out.into_iter().map(Monomial).collect()
}

impl PolyIdeal {
    pub fn new(generators: &[Poly], vars: &[Var], bound: usize) -> Result<PolyIdeal> {
        let mut by_degree: Vec<(usize, &Poly)> = Vec::new();
        for g in generators.iter().filter(|g| !g.is_zero()) {
            let comps = poly_components(g);
            if comps.len() != 1 {
                return Err(Error::NotHomogeneous("ideal generators must be homogeneous".into()));
            }
            by_degree.push((*comps.keys().next().expect("component"), g));
        }
        let mut vars = vars.to_vec();
        vars.sort();
        let mut slices = BTreeMap::new();
        for k in 0..=bound {
            let mut e = Echelon::new();
            for (d, g) in &by_degree {
                if *d > k {
                    continue;
                }
                for m in monomials_of_degree(&vars, k - d) {
                    let p = poly_mul(&Poly::basis(m), g);
                    if !p.is_zero() {
                        e.insert(&p);
                    }
                }
            }
            slices.insert(k, e);
        }
        Ok(PolyIdeal { bound, slices })
    }

    /// Canonical representative of the coset of `f`.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        for (d, part) in poly_components(f) {
            let e = self
                .slices
                .get(&d)
                .ok_or_else(|| Error::Truncation(format!("polynomial degree {d} exceeds the bound {}", self.bound)))?;
            out.add_assign(&e.reduce(&part));
        }
        Ok(out)
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }
}

#[derive(Clone, Debug)]
enum El {
    Necklace(Cyclic),
    WithT(NecklaceT),
    Poly(Poly),
}

/// The eight corners of the cube and the maps between them.
pub struct Cube<'a> {
    spec: &'a DoubleBracketSpec,
    theta: &'a DoubleDerivation,
    ext: Extension,
    red: Reduction,
    base_rep: RepBracket,
    ext_rep: RepBracket,
    ideal: PolyIdeal,
    ext_ideal: PolyIdeal,
    bound: usize,
}

const CORNERS: [&str; 8] = [
    "A_nat",
    "A<t>_nat",
    "(A_w)_nat",
    "A_w<t>_nat",
    "A_d",
    "A<t>_d",
    "(A_w)_d",
    "(A_w<t>)_d",
];

const FACES: [(&str, [usize; 4]); 6] = [
    ("top (inclusion, pr)", [0, 1, 2, 3]),
    ("bottom (inclusion, pr)", [4, 5, 6, 7]),
    ("back (pr, Tr)", [0, 2, 4, 6]),
    ("front (pr, Tr)", [1, 3, 5, 7]),
    ("left (inclusion, Tr)", [0, 1, 4, 5]),
    ("right (inclusion, Tr)", [2, 3, 6, 7]),
];

impl<'a> Cube<'a> {
    pub fn new(spec: &'a DoubleBracketSpec, theta: &'a DoubleDerivation, w: &NC, dims: &[usize], bound: usize) -> Result<Cube<'a>> {
        let q = spec.quiver();
        let ext = extend_double(spec, theta)?;
        let red = Reduction::new(q, w, None, bound)?;
        let base_scheme = RepScheme::new(q, dims)?;
        let ext_scheme = RepScheme::new(ext.quiver(), dims)?;
        let base_rep = RepBracket::new(spec, &base_scheme)?;
        let ext_rep = RepBracket::new(ext.spec(), &ext_scheme)?;
        let mu: Vec<Poly> = base_scheme
            .moment_matrix(w)
            .iter()
            .flat_map(|m| (0..m.rows()).flat_map(move |i| (0..m.cols()).map(move |j| m.get(i, j).clone())))
            .collect();
        let ideal = PolyIdeal::new(&mu, &base_scheme.variables(), bound)?;
        let ext_ideal = PolyIdeal::new(&mu, &ext_scheme.variables(), bound)?;
        Ok(Cube { spec, theta, ext, red, base_rep, ext_rep, ideal, ext_ideal, bound })
    }

    fn nc_ext(&self) -> NcExtension<'_> {
        NcExtension::new(self.spec, |x| self.theta.induced(x))
    }

    fn reduce_t(&self, x: &NecklaceT) -> Result<NecklaceT> {
        Ok(NecklaceT { necklace: self.red.reduce_cyclic(&x.necklace)?, t: x.t.clone() })
    }

    fn trace_t(&self, x: &NecklaceT) -> Poly {
        let scheme = self.ext_rep.scheme();
        let mut p = scheme.trace(&self.ext.embed(&x.necklace.lift()));
        p.add_scaled(&scheme.trace(&self.ext.t()), &x.t);
        p
    }

    fn normalize(&self, corner: usize, x: &El) -> Result<El> {
        Ok(match (corner, x) {
            (2, El::Necklace(c)) => El::Necklace(self.red.reduce_cyclic(c)?),
            (3, El::WithT(c)) => El::WithT(self.reduce_t(c)?),
            (4 | 5, El::Poly(p)) => El::Poly(drop_constant(p)),
            (6, El::Poly(p)) => El::Poly(drop_constant(&self.ideal.reduce(p)?)),
            (7, El::Poly(p)) => El::Poly(drop_constant(&self.ext_ideal.reduce(p)?)),
            _ => x.clone(),
        })
    }

    fn equal(&self, corner: usize, x: &El, y: &El) -> Result<bool> {
        Ok(match (self.normalize(corner, x)?, self.normalize(corner, y)?) {
            (El::Necklace(a), El::Necklace(b)) => a == b,
            (El::WithT(a), El::WithT(b)) => a == b,
            (El::Poly(a), El::Poly(b)) => a == b,
            _ => false,
        })
    }

    fn bracket(&self, corner: usize, x: &El, y: &El) -> Result<El> {
        Ok(match (corner, x, y) {
            (0, El::Necklace(a), El::Necklace(b)) => El::Necklace(self.spec.cyclic_bracket(a, b)),
            (1, El::WithT(a), El::WithT(b)) => El::WithT(self.nc_ext().bracket(a, b)),
            (2, El::Necklace(a), El::Necklace(b)) => El::Necklace(self.red.induced_lie(self.spec, a, b)?),
            (3, El::WithT(a), El::WithT(b)) => {
                let (ra, rb) = (self.reduce_t(a)?, self.reduce_t(b)?);
                self.red.induced_lie(self.spec, &ra.necklace, &rb.necklace)?;
                El::WithT(self.reduce_t(&self.nc_ext().bracket(&ra, &rb))?)
            }
            (4, El::Poly(a), El::Poly(b)) => El::Poly(self.base_rep.bracket(a, b)),
            (5, El::Poly(a), El::Poly(b)) => El::Poly(self.ext_rep.bracket(a, b)),
            (6, El::Poly(a), El::Poly(b)) => El::Poly(self.ideal.reduce(&self.base_rep.bracket(a, b))?),
            (7, El::Poly(a), El::Poly(b)) => El::Poly(self.ext_ideal.reduce(&self.ext_rep.bracket(a, b))?),
            _ => return Err(Error::Unsupported("element does not live at this corner".into())),
        })
    }

    fn map(&self, from: usize, to: usize, x: &El) -> Result<El> {
        Ok(match (from, to, x) {
            (0, 1, El::Necklace(c)) | (2, 3, El::Necklace(c)) => El::WithT(NecklaceT { necklace: c.clone(), t: Q::zero() }),
            (0, 2, El::Necklace(c)) => El::Necklace(self.red.reduce_cyclic(c)?),
            (1, 3, El::WithT(c)) => El::WithT(self.reduce_t(c)?),
            (0, 4, El::Necklace(c)) | (2, 6, El::Necklace(c)) => El::Poly(self.base_rep.scheme().trace_cyclic(c)),
            (1, 5, El::WithT(c)) | (3, 7, El::WithT(c)) => El::Poly(self.trace_t(c)),
            (4, 5, El::Poly(p)) | (4, 6, El::Poly(p)) | (5, 7, El::Poly(p)) | (6, 7, El::Poly(p)) => El::Poly(p.clone()),
            _ => return Err(Error::Unsupported(format!("no map {} -> {}", CORNERS[from], CORNERS[to]))),
        })
    }

    fn render(&self, x: &El) -> String {
        match x {
            El::Necklace(c) => render_cyclic(self.spec.quiver(), c),
            El::WithT(c) => format!("{} + {} tbar", render_cyclic(self.spec.quiver(), &c.necklace), c.t),
            El::Poly(p) => self.ext_rep.scheme().render(p),
        }
    }

    fn sample(&self, corner: usize, s: &mut Sampler, max_len: usize) -> Result<El> {
        let q = self.spec.quiver();
        let c = to_cyclic(&s.closed_element(q, max_len, 2));
        Ok(match corner {
            0 => El::Necklace(c),
            1 => El::WithT(NecklaceT { necklace: c, t: q_of(s.coefficient()) }),
            2 => El::Necklace(self.red.reduce_cyclic(&c)?),
            4 => El::Poly(self.base_rep.scheme().trace_cyclic(&c)),
            _ => return Err(Error::Unsupported("faces start at A_nat, A<t>_nat, (A_w)_nat or A_d".into())),
        })
    }

    /// Both routes around a face agree and are Lie morphisms on samples.
    pub fn check_face(&self, face: usize, samples: usize, seed: u64) -> Check {
        let (name, [src, m1, m2, dst]) = FACES[face];
        let name = format!("cube face: {name}");
        let max_len = ((self.bound + 2) / 2).max(1);
        let mut s = Sampler::new(seed.wrapping_add(face as u64));
        let mut witnesses = Vec::new();
        let mut done = 0;
        let mut skipped = 0;
        for _ in 0..samples {
            let run = |s: &mut Sampler| -> Result<Vec<(String, El, El)>> {
                let x = self.sample(src, s, max_len)?;
                let y = self.sample(src, s, max_len)?;
                let route = |v: &El, mid: usize| -> Result<El> { self.map(mid, dst, &self.map(src, mid, v)?) };
                let xy = self.bracket(src, &x, &y)?;
                let mut out = Vec::new();
                let (x1, x2) = (route(&x, m1)?, route(&x, m2)?);
                out.push((format!("routes on {}", self.render(&x)), x1, x2));
                for mid in [m1, m2] {
                    let lhs = route(&xy, mid)?;
                    let rhs = self.bracket(dst, &route(&x, mid)?, &route(&y, mid)?)?;
                    out.push((
                        format!("via {}: image of {{{}, {}}}", CORNERS[mid], self.render(&x), self.render(&y)),
                        lhs,
                        rhs,
                    ));
                }
                Ok(out)
            };
            match run(&mut s) {
                Ok(comparisons) => {
                    done += 1;
                    for (label, a, b) in comparisons {
                        match self.equal(dst, &a, &b) {
                            Ok(true) => {}
                            Ok(false) => witnesses.push(Witness {
                                input: label,
                                value: format!("{} vs {}", self.render(&a), self.render(&b)),
                                arity: 0,
                            }),
                            Err(_) => skipped += 1,
                        }
                    }
                }
                Err(Error::Truncation(_)) => skipped += 1,
                Err(e) => return Check::fail(name, e.to_string(), Vec::new()),
            }
        }
        let detail = format!("{done} sampled pairs, {skipped} beyond the truncation bound");
        if done == 0 {
            return Check::indeterminate(name, detail);
        }
        Check::from_witnesses(name, detail, witnesses)
    }

    /// Preconditions and all six faces.
    pub fn report(&self, samples: usize, seed: u64) -> Report {
        let mut r = Report::new("cube");
        r.param("bound", self.bound);
        r.param("dims", format!("{:?}", self.base_rep.scheme().dims()));
        r.push(Check::timed(|| crate::extension::check_double_poisson_derivation(self.spec, self.theta)));
        r.push(Check::timed(|| check_ideal_preservation(self.theta, &self.red)));
        for face in 0..FACES.len() {
            r.push(Check::timed(|| self.check_face(face, samples, seed)));
        }
        r
    }
}

/// Necklace classes of idempotents vanish while their traces are the
/// dimensions, so the polynomial corners are compared modulo constants.
fn drop_constant(p: &Poly) -> Poly {
    p.filter(|m| m.degree() > 0)
}

fn q_of(n: i64) -> Q {
    q(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbracket::standard_moment;
    use crate::expr::parse_nc;

    fn jordan() -> DoubleBracketSpec {
        DoubleBracketSpec::standard(&Quiver::jordan().double(0).unwrap()).unwrap()
    }

    #[test]
    fn matrices_and_traces() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let s = RepScheme::new(&q, &[2]).unwrap();
        let a = q.letter_by_name("a").unwrap();
        assert_eq!(s.render(&s.word_matrix(&Word::letter(a)).get(0, 1).clone()), "a[1,2]");
        assert_eq!(s.word_matrix(&Word::unit(0)), Matrix::identity(2));
        let aas = parse_nc(&q, "a.a*").unwrap();
        assert_eq!(s.render(s.matrix(&aas, 0, 0).get(0, 0)), "a[1,1] a*[1,1] + a[1,2] a*[2,1]");
        assert_eq!(s.trace(&aas), s.trace(&parse_nc(&q, "a*.a").unwrap()));
        assert_eq!(s.render(&s.trace(&parse_nc(&q, "a").unwrap())), "a[1,1] + a[2,2]");
        assert_eq!(s.trace(&parse_nc(&q, "e(0)").unwrap()), poly_const(q_of(2)));
    }

    #[test]
    fn jordan_pairing_and_jacobi() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let (a, astar) = (q.arrow_id("a").unwrap(), q.arrow_id("a*").unwrap());
        for n in [1, 2, 3] {
            let rb = RepBracket::new(&spec, &RepScheme::new(&q, &[n]).unwrap()).unwrap();
            assert!(rb.check_dual_pairing(a, astar).passed());
        }
        let rb3 = RepBracket::new(&spec, &RepScheme::new(&q, &[3]).unwrap()).unwrap();
        assert!(rb3.check_jacobi_samples(60, 0).passed());
        let rb = RepBracket::new(&spec, &RepScheme::new(&q, &[2]).unwrap()).unwrap();
        assert!(rb.check_jacobi_exhaustive().passed());
        assert!(check_trace_lie_morphism(&spec, &rb, 40, 0, 4).passed());
        assert!(check_matrix_formula(&spec, &rb, 20, 1, 3).passed());
        assert!(check_moment_property(&rb, &standard_moment(&q)).passed());
    }

    #[test]
    fn a3_moment_and_trace() {
        let spec = DoubleBracketSpec::standard(&Quiver::a3_framed().double(0).unwrap()).unwrap();
        let q = spec.quiver().clone();
        let rb = RepBracket::new(&spec, &RepScheme::new(&q, &[1, 2, 1, 1]).unwrap()).unwrap();
        assert!(check_moment_property(&rb, &standard_moment(&q)).passed());
        assert!(check_trace_lie_morphism(&spec, &rb, 30, 2, 4).passed());
        assert!(check_matrix_formula(&spec, &rb, 20, 3, 3).passed());
    }

    #[test]
    fn corrupted_bracket_breaks_the_trace_morphism() {
        let qbar = Quiver::jordan().double(0).unwrap();
        let (a, astar) = (qbar.arrow_id("a").unwrap(), qbar.arrow_id("a*").unwrap());
        let e = crate::ncalg::nc_unit(0);
        let aa = crate::ncalg::nc_letter(qbar.letter(a));
        let mut v = crate::ncalg::tensor2(&e, &e);
        v.add_assign(&crate::ncalg::tensor2(&aa, &e));
        let spec = DoubleBracketSpec::build(qbar.clone(), 0, vec![(a, astar, v)]).unwrap();
        let rb = RepBracket::new(&spec, &RepScheme::new(&qbar, &[2]).unwrap()).unwrap();
        let x = parse_nc(&qbar, "a.a").unwrap();
        let y = parse_nc(&qbar, "a*").unwrap();
        let s = rb.scheme();
        let lhs = rb.bracket(&s.trace(&x), &s.trace(&y));
        assert_eq!(lhs, s.trace(&spec.loday(&x, &y)));
        assert!(!check_trace_lie_morphism(&jordan(), &RepBracket::new(&spec, s).unwrap(), 40, 0, 4).passed());
    }

    #[test]
    fn ideal_membership() {
        let q = Quiver::jordan().double(0).unwrap();
        let s = RepScheme::new(&q, &[1]).unwrap();
        let mu: Vec<Poly> = s.moment_matrix(&standard_moment(&q)).iter().map(|m| m.get(0, 0).clone()).collect();
        assert!(mu[0].is_zero());
        let s2 = RepScheme::new(&q, &[2]).unwrap();
        let m = s2.moment_matrix(&standard_moment(&q));
        let gens: Vec<Poly> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| m[0].get(i, j).clone()).collect();
        let ideal = PolyIdeal::new(&gens, &s2.variables(), 4).unwrap();
        assert!(ideal.contains(&s2.trace(&parse_nc(&q, "a.a*.a - a*.a.a").unwrap())).unwrap());
        assert!(!ideal.contains(&s2.trace(&parse_nc(&q, "a.a*").unwrap())).unwrap());
        assert!(ideal.reduce(&s2.trace(&parse_nc(&q, "a.a.a.a.a").unwrap())).is_err());
    }

    #[test]
    fn cube_commutes() {
        let a3 = DoubleBracketSpec::standard(&Quiver::a3_framed().double(0).unwrap()).unwrap();
        let jd = jordan();
        let cases: Vec<(&DoubleBracketSpec, Vec<usize>)> = vec![(&a3, vec![1, 1, 1, 1]), (&jd, vec![2])];
        for (spec, dims) in cases {
            let q = spec.quiver().clone();
            for theta in [DoubleDerivation::zero(&q), DoubleDerivation::inner(&q)] {
                for w in [standard_moment(&q), NC::zero()] {
                    let cube = Cube::new(spec, &theta, &w, &dims, 4).unwrap();
                    let r = cube.report(15, 0);
                    for c in &r.checks {
                        assert!(c.passed(), "{} {:?}", c.name, c.witnesses.first());
                    }
                }
            }
        }
    }

    /// The half-inner derivation violates `Θ(w) ∈ A ⊗ AwA + AwA ⊗ A`, but its
    /// `θ` still kills `w` modulo commutators, so every face commutes.
    #[test]
    fn cube_with_failed_precondition() {
        let spec = jordan();
        let q = spec.quiver().clone();
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), "e(0) # a".to_string());
        m.insert("a*".to_string(), "-a* # e(0)".to_string());
        let theta = DoubleDerivation::from_map(&q, &m).unwrap();
        assert!(theta.induced(&standard_moment(&q)).is_zero());
        let cube = Cube::new(&spec, &theta, &standard_moment(&q), &[2], 4).unwrap();
        let r = cube.report(30, 0);
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["Theta preserves the ideal"]);
    }
}
