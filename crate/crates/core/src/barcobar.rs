//! Bar and cobar constructions, shifted brackets, the Connes complex and the
//! Lie bracket on reduced cyclic homology.
//!
//! Algebras are path algebras or their truncated quotients, graded by path
//! length. Every differential here preserves that weight, so each complex
//! splits into finite blocks that are assembled and eliminated exactly. The
//! algebras in scope carry no internal differential, so the bar differential
//! is `b` and the cobar differential is `b + δ`.
//!
//! A bar word `[a_1|…|a_k]` stands for `𝔰a_1 t 𝔰a_2 t … t 𝔰a_k` with every
//! `a_i` in the augmentation ideal and `|𝔰a| = |a| - 1`. A cobar word
//! `[X_1, …, X_m]` stands for `𝔰⁻¹X_1 ⊗ … ⊗ 𝔰⁻¹X_m` with
//! `|𝔰⁻¹X| = |X| + 1`. The Connes complex uses chains `a_0 ⊗ … ⊗ a_n` of
//! basis words closed around the quiver, modulo the Koszul-signed cyclic
//! operator.

use std::collections::BTreeMap;

use crate::dbracket::{sign_q, DoubleBracketSpec};
use crate::error::{Error, Result};
use crate::expr::{render_nc, render_terms, render_word};
use crate::hamred::Reduction;
use crate::lin::{q, Lin};
use crate::linalg::{kernel, Echelon};
use crate::ncalg::{nc_word, words_of_length, Tensor, Word, NC};
use crate::quiver::Quiver;
use crate::report::{Check, Report, Witness};
use crate::sample::Sampler;
use crate::sign::{koszul_sign, permute, sign_of};

/// A path-length graded algebra with a basis of words in every length.
pub trait GradedAlgebra {
    fn quiver(&self) -> &Quiver;
    /// Basis words of the given path length; length 0 gives the idempotents.
    fn basis(&self, length: usize) -> Vec<Word>;
    /// Product of two basis words, expanded in the basis.
    fn product(&self, u: &Word, v: &Word) -> Result<NC>;
    /// Normal form of an element of the ambient path algebra.
    fn normal_form(&self, x: &NC) -> Result<NC>;
    /// Largest length up to which bases and products are exact, or `None`
    /// when they are exact in every length.
    fn exact_through(&self) -> Option<usize>;
}

/// The free path algebra of a quiver.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    quiver: Quiver,
}

impl PathAlgebra {
    pub fn new(quiver: Quiver) -> PathAlgebra {
        PathAlgebra { quiver }
    }
}

impl GradedAlgebra for PathAlgebra {
    fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn basis(&self, length: usize) -> Vec<Word> {
        words_of_length(self.quiver.num_vertices(), &self.quiver.letters(), length)
    }

    fn product(&self, u: &Word, v: &Word) -> Result<NC> {
        Ok(u.mul(v).map(nc_word).unwrap_or_default())
    }

    fn normal_form(&self, x: &NC) -> Result<NC> {
        Ok(x.clone())
    }

    fn exact_through(&self) -> Option<usize> {
        None
    }
}

impl GradedAlgebra for Reduction {
    fn quiver(&self) -> &Quiver {
        self.host()
    }

    fn basis(&self, length: usize) -> Vec<Word> {
        Reduction::basis(self, length)
    }

    fn product(&self, u: &Word, v: &Word) -> Result<NC> {
        let Some(uv) = u.mul(v) else { return Ok(NC::zero()) };
        if uv.len() > self.bound() && GradedAlgebra::exact_through(self).is_none() {
            return Ok(NC::zero());
        }
        Reduction::normal_form(self, &nc_word(uv))
    }

    fn normal_form(&self, x: &NC) -> Result<NC> {
        if GradedAlgebra::exact_through(self).is_none() {
            let kept = x.filter(|w| w.len() <= self.bound());
            return Reduction::normal_form(self, &kept);
        }
        Reduction::normal_form(self, x)
    }

    /// A quotient whose basis is empty in some length up to the bound is
    /// finite dimensional, and then every length is exact.
    fn exact_through(&self) -> Option<usize> {
        if (1..=self.bound()).any(|l| Reduction::basis(self, l).is_empty()) {
            None
        } else {
            Some(self.bound())
        }
    }
}

/// `K[x]/(x²)`: one loop `x` with the relation `x.x = 0`.
pub fn dual_numbers() -> Result<Reduction> {
    let q = Quiver::loops(&["x"]);
    let x = q.letter(0);
    let xx = Word::from_letters(vec![x, x]).expect("loop");
    Reduction::new(&q, &nc_word(xx), None, 3)
}

fn ensure_exact(alg: &dyn GradedAlgebra, weight: usize) -> Result<()> {
    match alg.exact_through() {
        Some(d) if weight > d => Err(Error::Truncation(format!(
            "weight {weight} exceeds the exact range {d} of the algebra"
        ))),
        _ => Ok(()),
    }
}

/// All sequences of items whose weights are at least `min_part` and sum to
/// `total`, with consecutive items accepted by `link`.
fn sequences<T: Clone>(parts: &[Vec<T>], min_part: usize, total: usize, link: &dyn Fn(&T, &T) -> bool) -> Vec<Vec<T>> {
    fn extend<T: Clone>(
        parts: &[Vec<T>],
        min_part: usize,
        remaining: usize,
        prefix: &mut Vec<T>,
        link: &dyn Fn(&T, &T) -> bool,
        out: &mut Vec<Vec<T>>,
    ) {
        if remaining == 0 && !prefix.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for w in min_part.max(1)..=remaining {
            for item in &parts[w] {
                if prefix.last().is_none_or(|p| link(p, item)) {
                    prefix.push(item.clone());
                    extend(parts, min_part, remaining - w, prefix, link, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    extend(parts, min_part, total, &mut Vec::new(), link, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Bar construction

pub type BarWord = Vec<Word>;
pub type BarElement = Lin<BarWord>;

/// `|𝔰a_1 t … t 𝔰a_k| = Σ (|a_i| - 1)`.
pub fn bar_degree(x: &[Word]) -> i64 {
    x.iter().map(|a| a.degree() - 1).sum()
}

fn bar_source(x: &[Word]) -> u32 {
    x.last().expect("nonempty bar word").source()
}

fn bar_target(x: &[Word]) -> u32 {
    x[0].target()
}

/// `b(𝔰a_1 ⊗ … ⊗ 𝔰a_k) = Σ_i (-1)^{|𝔰a_{<i+1}|+1} 𝔰a_1 ⊗ … ⊗ 𝔰(a_i a_{i+1}) ⊗ …`,
/// keeping only the augmentation-ideal part of each product.
pub fn bar_differential(alg: &dyn GradedAlgebra, x: &[Word]) -> Result<BarElement> {
    let mut out = BarElement::zero();
    let mut prefix = 0i64;
    for i in 0..x.len().saturating_sub(1) {
        prefix += x[i].degree() - 1;
        let product = alg.product(&x[i], &x[i + 1])?;
        for (w, c) in product.iter() {
            if w.is_unit() {
                continue;
            }
            let mut key = x[..i].to_vec();
            key.push(w.clone());
            key.extend_from_slice(&x[i + 2..]);
            out.add_term(key, c * sign_q(prefix + 1));
        }
    }
    Ok(out)
}

/// All bar words of total path length `weight`.
pub fn bar_basis(alg: &dyn GradedAlgebra, weight: usize) -> Vec<BarWord> {
    let parts: Vec<Vec<Word>> = (0..=weight).map(|l| if l == 0 { Vec::new() } else { alg.basis(l) }).collect();
    sequences(&parts, 1, weight, &|a: &Word, b: &Word| a.source() == b.target())
}

pub fn bar_linear(alg: &dyn GradedAlgebra, x: &BarElement) -> Result<BarElement> {
    let mut out = BarElement::zero();
    for (k, c) in x.iter() {
        out.add_scaled(&bar_differential(alg, k)?, c);
    }
    Ok(out)
}

pub fn render_bar(quiver: &Quiver, x: &[Word]) -> String {
    format!("[{}]", x.iter().map(|w| render_word(quiver, w)).collect::<Vec<_>>().join("|"))
}

pub fn render_bar_element(quiver: &Quiver, x: &BarElement) -> String {
    render_terms(x, |k| render_bar(quiver, k))
}

// ---------------------------------------------------------------------------
// Cobar construction of the bar construction

pub type CobarWord = Vec<BarWord>;
pub type CobarElement = Lin<CobarWord>;

/// `Σ_j (|X_j| + 1)`.
pub fn cobar_degree(x: &[BarWord]) -> i64 {
    x.iter().map(|c| bar_degree(c) + 1).sum()
}

/// `(∂ + δ)` on a cobar word, where `∂` is induced by the bar differential:
/// `∂ = Σ_i (-1)^{|𝔰⁻¹c_{<i}|+1} … 𝔰⁻¹(b c_i) …` and
/// `δ = Σ_i (-1)^{|𝔰⁻¹c_{<i}|+|𝔰⁻¹c_{i1}|} … 𝔰⁻¹c_{i1} ⊗ 𝔰⁻¹c_{i2} …`
/// over the deconcatenations `c_i = c_{i1} c_{i2}` into nonempty halves.
pub fn cobar_differential(alg: &dyn GradedAlgebra, x: &[BarWord]) -> Result<CobarElement> {
    let mut out = CobarElement::zero();
    let mut prefix = 0i64;
    for (i, c) in x.iter().enumerate() {
        for (c2, coeff) in bar_differential(alg, c)?.iter() {
            let mut key = x[..i].to_vec();
            key.push(c2.clone());
            key.extend_from_slice(&x[i + 1..]);
            out.add_term(key, coeff * sign_q(prefix + 1));
        }
        for j in 1..c.len() {
            let (c1, c2) = (c[..j].to_vec(), c[j..].to_vec());
            let s = prefix + bar_degree(&c1) + 1;
            let mut key = x[..i].to_vec();
            key.push(c1);
            key.push(c2);
            key.extend_from_slice(&x[i + 1..]);
            out.add_term(key, sign_q(s));
        }
        prefix += bar_degree(c) + 1;
    }
    Ok(out)
}

/// All cobar words of total path length `weight`.
pub fn cobar_basis(alg: &dyn GradedAlgebra, weight: usize) -> Vec<CobarWord> {
    let parts: Vec<Vec<BarWord>> = (0..=weight).map(|l| if l == 0 { Vec::new() } else { bar_basis(alg, l) }).collect();
    sequences(&parts, 1, weight, &|a: &BarWord, b: &BarWord| bar_source(a) == bar_target(b))
}

pub fn cobar_linear(alg: &dyn GradedAlgebra, x: &CobarElement) -> Result<CobarElement> {
    let mut out = CobarElement::zero();
    for (k, c) in x.iter() {
        out.add_scaled(&cobar_differential(alg, k)?, c);
    }
    Ok(out)
}

pub fn render_cobar(quiver: &Quiver, x: &[BarWord]) -> String {
    x.iter().map(|c| render_bar(quiver, c)).collect::<Vec<_>>().join(" (x) ")
}

pub fn render_cobar_element(quiver: &Quiver, x: &CobarElement) -> String {
    render_terms(x, |k| render_cobar(quiver, k))
}

/// The counit `ε: ΩBA → A`: a product of weight-one generators `𝔰⁻¹𝔰a`
/// goes to the product of the `a`, every other word to zero.
pub fn counit(alg: &dyn GradedAlgebra, x: &[BarWord]) -> Result<NC> {
    if x.iter().any(|c| c.len() != 1) {
        return Ok(NC::zero());
    }
    multiply_words(alg, &x.iter().map(|c| c[0].clone()).collect::<Vec<_>>())
}

fn multiply_words(alg: &dyn GradedAlgebra, words: &[Word]) -> Result<NC> {
    let mut acc = nc_word(words[0].clone());
    for w in &words[1..] {
        let mut next = NC::zero();
        for (u, c) in acc.iter() {
            next.add_scaled(&alg.product(u, w)?, c);
        }
        acc = next;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Blockwise homology

/// Cohomology dimensions of one finite block. `cells[p]` is a basis of the
/// degree `p` piece and `d` raises degree by one.
fn block_cohomology<K: Ord + Clone>(
    cells: &BTreeMap<i64, Vec<K>>,
    d: &dyn Fn(&K) -> Result<Lin<K>>,
) -> Result<BTreeMap<i64, usize>> {
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for (p, basis) in cells {
        let mut e = Echelon::new();
        for x in basis {
            e.insert(&d(x)?);
        }
        ranks.insert(*p, e.rank());
    }
    Ok(cells
        .iter()
        .map(|(p, basis)| {
            let out_rank = ranks[p];
            let in_rank = ranks.get(&(p - 1)).copied().unwrap_or(0);
            (*p, basis.len() - out_rank - in_rank)
        })
        .collect())
}

/// Elements of a block whose image under `d∘d` is nonzero.
fn square_failures<K: Ord + Clone>(
    cells: &BTreeMap<i64, Vec<K>>,
    d: &dyn Fn(&K) -> Result<Lin<K>>,
) -> Result<Vec<(K, Lin<K>)>> {
    let mut out = Vec::new();
    for basis in cells.values() {
        for x in basis {
            let mut dd = Lin::zero();
            for (k, c) in d(x)?.iter() {
                dd.add_scaled(&d(k)?, c);
            }
            if !dd.is_zero() {
                out.push((x.clone(), dd));
            }
        }
    }
    Ok(out)
}

fn cells_by_degree<K: Ord + Clone>(items: Vec<K>, degree: impl Fn(&K) -> i64) -> BTreeMap<i64, Vec<K>> {
    let mut cells: BTreeMap<i64, Vec<K>> = BTreeMap::new();
    for x in items {
        cells.entry(degree(&x)).or_default().push(x);
    }
    cells
}

/// `b² = 0` on every bar word of weight `1..=max_weight`.
pub fn check_bar_square(alg: &dyn GradedAlgebra, max_weight: usize) -> Result<Check> {
    ensure_exact(alg, max_weight)?;
    let q = alg.quiver();
    let mut witnesses = Vec::new();
    let mut total = 0;
    for weight in 1..=max_weight {
        let cells = cells_by_degree(bar_basis(alg, weight), |x| bar_degree(x));
        total += cells.values().map(Vec::len).sum::<usize>();
        let d = |x: &BarWord| bar_differential(alg, x);
        for (x, dd) in square_failures(&cells, &d)? {
            witnesses.push(Witness { input: render_bar(q, &x), value: render_bar_element(q, &dd), arity: 0 });
        }
    }
    Ok(Check::from_witnesses(
        "bar differential squares to zero",
        format!("{total} bar words of weight <= {max_weight}"),
        witnesses,
    ))
}

/// `(∂ + δ)² = 0` on every cobar word of weight `1..=max_weight`.
pub fn check_cobar_square(alg: &dyn GradedAlgebra, max_weight: usize) -> Result<Check> {
    ensure_exact(alg, max_weight)?;
    let q = alg.quiver();
    let mut witnesses = Vec::new();
    let mut total = 0;
    for weight in 1..=max_weight {
        let cells = cells_by_degree(cobar_basis(alg, weight), |x| cobar_degree(x));
        total += cells.values().map(Vec::len).sum::<usize>();
        let d = |x: &CobarWord| cobar_differential(alg, x);
        for (x, dd) in square_failures(&cells, &d)? {
            witnesses.push(Witness { input: render_cobar(q, &x), value: render_cobar_element(q, &dd), arity: 0 });
        }
    }
    Ok(Check::from_witnesses(
        "cobar differential squares to zero",
        format!("{total} cobar words of weight <= {max_weight}"),
        witnesses,
    ))
}

/// Cohomology of the cobar-bar block of one weight, by degree.
pub fn cobar_cohomology(alg: &dyn GradedAlgebra, weight: usize) -> Result<BTreeMap<i64, usize>> {
    ensure_exact(alg, weight)?;
    let cells = cells_by_degree(cobar_basis(alg, weight), |x| cobar_degree(x));
    block_cohomology(&cells, &|x: &CobarWord| cobar_differential(alg, x))
}

/// The counit is a quasi-isomorphism in weights `1..=max_weight`: the
/// cohomology is concentrated in degree 0 with the dimension of `A` in that
/// weight, the counit maps degree-0 cocycles onto `A` and kills coboundaries.
/// The weight-0 block is `S` on both sides. Every block is complete, so the
/// stable window is the whole exact range of the algebra.
pub fn check_resolution(alg: &dyn GradedAlgebra, max_weight: usize) -> Result<Check> {
    ensure_exact(alg, max_weight)?;
    let q = alg.quiver();
    let mut witnesses = Vec::new();
    let mut dims = Vec::new();
    for weight in 1..=max_weight {
        let cells = cells_by_degree(cobar_basis(alg, weight), |x| cobar_degree(x));
        let d = |x: &CobarWord| cobar_differential(alg, x);
        let h = block_cohomology(&cells, &d)?;
        let expected = alg.basis(weight).len();
        for (p, dim) in &h {
            let want = if *p == 0 { expected } else { 0 };
            if *dim != want {
                witnesses.push(Witness {
                    input: format!("weight {weight}, degree {p}"),
                    value: format!("H = {dim}, expected {want}"),
                    arity: 0,
                });
            }
        }
        if expected > 0 && !cells.contains_key(&0) {
            witnesses.push(Witness { input: format!("weight {weight}"), value: "no degree-0 cochains".into(), arity: 0 });
        }
        let degree0 = cells.get(&0).cloned().unwrap_or_default();
        let images: Vec<CobarElement> = degree0.iter().map(&d).collect::<Result<_>>()?;
        let mut eps_cocycles = Echelon::new();
        for combo in kernel(&images) {
            let mut value = NC::zero();
            for (i, c) in combo.iter() {
                value.add_scaled(&counit(alg, &degree0[*i])?, c);
            }
            eps_cocycles.insert(&value);
        }
        if eps_cocycles.rank() != expected {
            witnesses.push(Witness {
                input: format!("weight {weight}"),
                value: format!("counit image of cocycles has rank {}, expected {expected}", eps_cocycles.rank()),
                arity: 0,
            });
        }
        for x in cells.get(&-1).map(Vec::as_slice).unwrap_or_default() {
            let mut value = NC::zero();
            for (y, c) in d(x)?.iter() {
                value.add_scaled(&counit(alg, y)?, c);
            }
            if !value.is_zero() {
                witnesses.push(Witness { input: render_cobar(q, x), value: render_nc(q, &value), arity: 0 });
            }
        }
        dims.push(format!("{}:{}", weight, h.get(&0).copied().unwrap_or(0)));
    }
    let window = match alg.exact_through() {
        Some(d) => format!("exact through weight {d}"),
        None => "exact in every weight".into(),
    };
    Ok(Check::from_witnesses(
        "cobar-bar resolution",
        format!("H^0 dims by weight [{}]; higher H vanish; {window}", dims.join(", ")),
        witnesses,
    ))
}

/// Square-zero checks and the resolution check in one report.
pub fn bar_cobar_report(alg: &dyn GradedAlgebra, max_weight: usize) -> Result<Report> {
    let mut report = Report::new("bar-cobar");
    report.param("W", max_weight);
    report.push(Check::timed(|| check_bar_square(alg, max_weight).unwrap_or_else(|e| Check::indeterminate("bar differential squares to zero", e.to_string()))));
    report.push(Check::timed(|| check_cobar_square(alg, max_weight).unwrap_or_else(|e| Check::indeterminate("cobar differential squares to zero", e.to_string()))));
    report.push(Check::timed(|| check_resolution(alg, max_weight).unwrap_or_else(|e| Check::indeterminate("cobar-bar resolution", e.to_string()))));
    Ok(report)
}

// ---------------------------------------------------------------------------
// Connes complex

/// A Hochschild chain `a_0 ⊗ … ⊗ a_n` of basis words.
pub type Chain = Vec<Word>;

fn chain_closed(c: &[Word]) -> bool {
    (0..c.len()).all(|j| c[j].source() == c[(j + 1) % c.len()].target())
}

/// `τ(a_0 ⊗ … ⊗ a_n) = (-1)^{n + |a_n|(|a_0|+…+|a_{n-1}|)} a_n ⊗ a_0 ⊗ … ⊗ a_{n-1}`.
pub fn cyclic_operator(c: &[Word]) -> (Chain, i64) {
    let n = c.len() - 1;
    let rest: i64 = c[..n].iter().map(Word::degree).sum();
    let mut out = vec![c[n].clone()];
    out.extend_from_slice(&c[..n]);
    (out, sign_of(n as i64 + c[n].degree() * rest))
}

/// The canonical representative of the class of `c` in `coker(1 - τ)`: the
/// least rotation with its sign, or `None` when the class is zero.
pub fn canonical_chain(c: &[Word]) -> Option<(Chain, i64)> {
    let mut best: Option<(Chain, i64)> = None;
    let mut current = (c.to_vec(), 1i64);
    let mut zero = false;
    for _ in 0..c.len() {
        match &best {
            None => best = Some(current.clone()),
            Some((b, s)) => {
                if current.0 < *b {
                    best = Some(current.clone());
                } else if current.0 == *b && current.1 != *s {
                    zero = true;
                }
            }
        }
        let (next, s) = cyclic_operator(&current.0);
        current = (next, current.1 * s);
    }
    let (b, s) = best.expect("nonempty chain");
    if zero {
        return None;
    }
    // Repeated visits of the least rotation come from periodic chains; the
    // comparison above already caught sign clashes among them.
    Some((b, s))
}

/// The Hochschild differential
/// `b = Σ_{i<n} (-1)^i … ⊗ a_i a_{i+1} ⊗ … + (-1)^{n + |a_n|(|a_0|+…+|a_{n-1}|)} a_n a_0 ⊗ a_1 ⊗ … ⊗ a_{n-1}`.
pub fn hochschild_b(alg: &dyn GradedAlgebra, c: &[Word]) -> Result<Lin<Chain>> {
    let n = c.len() - 1;
    let mut out = Lin::zero();
    if n == 0 {
        return Ok(out);
    }
    for i in 0..n {
        for (w, coeff) in alg.product(&c[i], &c[i + 1])?.iter() {
            let mut key = c[..i].to_vec();
            key.push(w.clone());
            key.extend_from_slice(&c[i + 2..]);
            out.add_term(key, coeff * sign_q(i as i64));
        }
    }
    let rest: i64 = c[..n].iter().map(Word::degree).sum();
    for (w, coeff) in alg.product(&c[n], &c[0])?.iter() {
        let mut key = vec![w.clone()];
        key.extend_from_slice(&c[1..n]);
        out.add_term(key, coeff * sign_q(n as i64 + c[n].degree() * rest));
    }
    Ok(out)
}

/// All closed chains with `n + 1` factors and total path length `weight`.
pub fn closed_chains(alg: &dyn GradedAlgebra, n: usize, weight: usize) -> Vec<Chain> {
    let parts: Vec<Vec<Word>> = (0..=weight).map(|l| alg.basis(l)).collect();
    let mut out = Vec::new();
    fn extend(
        parts: &[Vec<Word>],
        slots: usize,
        remaining: usize,
        prefix: &mut Vec<Word>,
        out: &mut Vec<Chain>,
    ) {
        if prefix.len() == slots {
            if remaining == 0 && chain_closed(prefix) {
                out.push(prefix.clone());
            }
            return;
        }
        for l in 0..=remaining {
            for w in &parts[l] {
                if prefix.last().is_none_or(|p| p.source() == w.target()) {
                    prefix.push(w.clone());
                    extend(parts, slots, remaining - l, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    extend(&parts, n + 1, weight, &mut Vec::new(), &mut out);
    out
}

/// Basis of `C^λ_n` in one weight: the canonical representatives.
pub fn connes_basis(alg: &dyn GradedAlgebra, n: usize, weight: usize) -> Vec<Chain> {
    closed_chains(alg, n, weight)
        .into_iter()
        .filter(|c| canonical_chain(c).is_some_and(|(b, s)| b == *c && s == 1))
        .collect()
}

/// The induced differential on canonical classes.
pub fn connes_differential(alg: &dyn GradedAlgebra, c: &[Word]) -> Result<Lin<Chain>> {
    let mut out = Lin::zero();
    for (k, coeff) in hochschild_b(alg, c)?.iter() {
        if let Some((b, s)) = canonical_chain(k) {
            out.add_term(b, coeff * q(s));
        }
    }
    Ok(out)
}

/// One entry of a reduced cyclic homology table.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HcEntry {
    pub weight: usize,
    pub n: usize,
    /// `None` when the block lies outside the exact range of the algebra.
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HcTable {
    pub entries: Vec<HcEntry>,
}

impl HcTable {
    pub fn dim(&self, weight: usize, n: usize) -> Option<usize> {
        self.entries.iter().find(|e| e.weight == weight && e.n == n).and_then(|e| e.dim)
    }

    /// Total dimension of `HC̄_n` over all computed weights.
    pub fn total(&self, n: usize) -> usize {
        self.entries.iter().filter(|e| e.n == n).filter_map(|e| e.dim).sum()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::from("weight  n  dim\n");
        for e in &self.entries {
            let dim = e.dim.map_or("indeterminate".to_string(), |d| d.to_string());
            out.push_str(&format!("{:>6} {:>2}  {}\n", e.weight, e.n, dim));
        }
        out
    }
}

/// Reduced cyclic homology `HC̄_n` for path lengths `1..=max_weight` and
/// `n` in `n_lo..=n_hi`, computed blockwise from the Connes complex. The
/// weight-0 block is `C^λ(S)`, which the reduced theory removes. Blocks past
/// the exact range of the algebra are reported as indeterminate.
pub fn connes_homology(alg: &dyn GradedAlgebra, max_weight: usize, n_lo: usize, n_hi: usize) -> Result<HcTable> {
    if n_lo > n_hi {
        return Err(Error::Unsupported(format!("empty homological window {n_lo}..{n_hi}")));
    }
    let mut entries = Vec::new();
    for weight in 1..=max_weight {
        if ensure_exact(alg, weight).is_err() {
            entries.extend((n_lo..=n_hi).map(|n| HcEntry { weight, n, dim: None }));
            continue;
        }
        let mut cells = BTreeMap::new();
        for n in n_lo..=n_hi + 1 {
            cells.insert(-(n as i64), connes_basis(alg, n, weight));
        }
        let h = block_cohomology(&cells, &|c: &Chain| connes_differential(alg, c))?;
        entries.extend((n_lo..=n_hi).map(|n| HcEntry { weight, n, dim: Some(h[&-(n as i64)]) }));
    }
    Ok(HcTable { entries })
}

/// `b² = 0` on the canonical Connes classes of weights `1..=max_weight`
/// and `n <= n_hi + 1`.
pub fn check_connes_square(alg: &dyn GradedAlgebra, max_weight: usize, n_hi: usize) -> Result<Check> {
    ensure_exact(alg, max_weight)?;
    let q = alg.quiver();
    let mut witnesses = Vec::new();
    for weight in 1..=max_weight {
        let mut cells = BTreeMap::new();
        for n in 0..=n_hi + 1 {
            cells.insert(-(n as i64), connes_basis(alg, n, weight));
        }
        for (x, dd) in square_failures(&cells, &|c: &Chain| connes_differential(alg, c))? {
            witnesses.push(Witness {
                input: render_chain(q, &x),
                value: render_terms(&dd, |k| render_chain(q, k)),
                arity: 0,
            });
        }
    }
    Ok(Check::from_witnesses("Connes differential squares to zero", format!("weights <= {max_weight}, n <= {}", n_hi + 1), witnesses))
}

pub fn render_chain(quiver: &Quiver, c: &[Word]) -> String {
    c.iter().map(|w| render_word(quiver, w)).collect::<Vec<_>>().join(" # ")
}

// ---------------------------------------------------------------------------
// HC̄_0 and its Lie bracket

/// `HC̄_0` in weights `1..=max_weight`: closed words modulo the image of
/// `b(u ⊗ v) = uv - (-1)^{|u||v|} vu`, one echelon form per weight.
#[derive(Clone, Debug)]
pub struct Hc0 {
    max_weight: usize,
    images: BTreeMap<usize, Echelon<Word>>,
    basis: BTreeMap<usize, Vec<Word>>,
}

impl Hc0 {
    pub fn new(alg: &dyn GradedAlgebra, max_weight: usize) -> Result<Hc0> {
        ensure_exact(alg, max_weight)?;
        let mut images = BTreeMap::new();
        let mut basis = BTreeMap::new();
        for weight in 1..=max_weight {
            let mut e = Echelon::new();
            for c in closed_chains(alg, 1, weight) {
                let mut image = NC::zero();
                for (k, coeff) in hochschild_b(alg, &c)?.iter() {
                    image.add_term(k[0].clone(), coeff.clone());
                }
                e.insert(&image);
            }
            let free: Vec<Word> = alg.basis(weight).into_iter().filter(|w| w.is_closed() && !e.is_pivot(w)).collect();
            images.insert(weight, e);
            basis.insert(weight, free);
        }
        Ok(Hc0 { max_weight, images, basis })
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// Representative words of a basis of `HC̄_0` in one weight.
    pub fn basis(&self, weight: usize) -> &[Word] {
        self.basis.get(&weight).map(Vec::as_slice).unwrap_or_default()
    }

    /// Coordinates of the class of `x` (an element in normal form): open
    /// words and idempotents vanish, every other weight is reduced.
    pub fn reduce(&self, x: &NC) -> Result<NC> {
        let mut by_weight: BTreeMap<usize, NC> = BTreeMap::new();
        for (w, c) in x.iter() {
            if w.is_unit() || !w.is_closed() {
                continue;
            }
            by_weight.entry(w.len()).or_default().add_term(w.clone(), c.clone());
        }
        let mut out = NC::zero();
        for (weight, part) in by_weight {
            let e = self
                .images
                .get(&weight)
                .ok_or_else(|| Error::Truncation(format!("HC_0 is computed only through weight {}", self.max_weight)))?;
            out.add_assign(&e.reduce(&part));
        }
        Ok(out)
    }
}

/// How a closed word is lifted to a degree-0 cobar cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lift {
    /// One generator `𝔰⁻¹𝔰a` per letter.
    Letters,
    /// A single generator `𝔰⁻¹𝔰u` for the whole word.
    Whole,
    /// Two generators, split after the given number of letters.
    Split(usize),
}

/// The bracket on `HC̄_0`, computed on degree-0 cocycles of `(ΩBA)_♮`.
///
/// A class is lifted to a cyclic word of generators `𝔰⁻¹𝔰u`. On such
/// generators the extended bracket is `⟦𝔰⁻¹𝔰u, 𝔰⁻¹𝔰v⟧ = 𝔰⁻¹𝔰P ⊗ 𝔰⁻¹𝔰R` for
/// `⟦u, v⟧ = P ⊗ R` (the two desuspension signs and the conjugation sign
/// cancel in degree 0), with idempotent factors read as units of `T_S`. The
/// induced Loday bracket of cyclic words is then pushed back to `HC̄_0` by the
/// counit.
pub struct HcBracket<'a> {
    alg: &'a dyn GradedAlgebra,
    spec: &'a DoubleBracketSpec,
    hc0: Hc0,
}

impl<'a> HcBracket<'a> {
    pub fn new(alg: &'a dyn GradedAlgebra, spec: &'a DoubleBracketSpec, max_weight: usize) -> Result<HcBracket<'a>> {
        let ungraded = spec.degree() == 0 && alg.quiver().arrows().iter().all(|a| a.degree == 0);
        if !ungraded {
            return Err(Error::Unsupported("the HC_0 bracket is implemented for ungraded algebras".into()));
        }
        Ok(HcBracket { alg, spec, hc0: Hc0::new(alg, max_weight)? })
    }

    pub fn hc0(&self) -> &Hc0 {
        &self.hc0
    }

    /// `⟦𝔰⁻¹𝔰u, 𝔰⁻¹𝔰v⟧` as pairs of normal-form words.
    fn generator_bracket(&self, u: &Word, v: &Word) -> Result<Lin<(Word, Word)>> {
        let mut out = Lin::zero();
        for (k, c) in self.spec.words(u, v).iter() {
            let left = self.alg.normal_form(&nc_word(k[0].clone()))?;
            let right = self.alg.normal_form(&nc_word(k[1].clone()))?;
            for (p, a) in left.iter() {
                for (r, b) in right.iter() {
                    out.add_term((p.clone(), r.clone()), c * a * b);
                }
            }
        }
        Ok(out)
    }

    /// The Loday bracket of two cyclic cobar words of weight-one generators,
    /// as linear representatives `R y_{>j} y_{<j} P x_{>i} x_{<i}`.
    pub fn cobar_bracket(&self, x: &[Word], y: &[Word]) -> Result<Lin<Vec<Word>>> {
        let mut out = Lin::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                for ((p, r), c) in self.generator_bracket(&x[i], &y[j])?.iter() {
                    let mut word = vec![r.clone()];
                    word.extend_from_slice(&y[j + 1..]);
                    word.extend_from_slice(&y[..j]);
                    word.push(p.clone());
                    word.extend_from_slice(&x[i + 1..]);
                    word.extend_from_slice(&x[..i]);
                    let word: Vec<Word> = word.into_iter().filter(|w| !w.is_unit()).collect();
                    out.add_term(word, c.clone());
                }
            }
        }
        Ok(out)
    }

    fn lift(&self, w: &Word, how: Lift) -> Vec<Word> {
        let letters = || w.letters().iter().map(|l| Word::letter(*l)).collect::<Vec<_>>();
        match how {
            Lift::Letters if self.alg.basis(1).len() == self.alg.quiver().letters().len() => letters(),
            Lift::Split(k) if k > 0 && k < w.len() => vec![w.prefix(k), w.suffix(k)],
            _ => vec![w.clone()],
        }
    }

    fn push_forward(&self, x: &Lin<Vec<Word>>) -> Result<NC> {
        let mut out = NC::zero();
        for (word, c) in x.iter() {
            if word.is_empty() {
                continue;
            }
            out.add_scaled(&multiply_words(self.alg, word)?, c);
        }
        self.hc0.reduce(&out)
    }

    /// The bracket of two `HC̄_0` elements given by closed normal-form words.
    pub fn bracket_with(&self, c1: &NC, c2: &NC, how: Lift) -> Result<NC> {
        let mut total = Lin::zero();
        for (u, a) in c1.iter() {
            for (v, b) in c2.iter() {
                if u.is_unit() || v.is_unit() || !u.is_closed() || !v.is_closed() {
                    continue;
                }
                let lifted = self.cobar_bracket(&self.lift(u, how), &self.lift(v, how))?;
                total.add_scaled(&lifted, &(a * b));
            }
        }
        self.push_forward(&total)
    }

    pub fn bracket(&self, c1: &NC, c2: &NC) -> Result<NC> {
        self.bracket_with(c1, c2, Lift::Letters)
    }

    /// The cobar differential of every word in the bracket of two lifted
    /// words: zero exactly when the bracket lands in cocycles.
    pub fn bracket_cocycle_defect(&self, u: &Word, v: &Word, how: Lift) -> Result<CobarElement> {
        let mut out = CobarElement::zero();
        for (word, c) in self.cobar_bracket(&self.lift(u, how), &self.lift(v, how))?.iter() {
            let cobar: CobarWord = word.iter().map(|w| vec![w.clone()]).collect();
            if !cobar.is_empty() {
                out.add_scaled(&cobar_differential(self.alg, &cobar)?, c);
            }
        }
        Ok(out)
    }

    fn render(&self, x: &NC) -> String {
        render_nc(self.alg.quiver(), x)
    }

    fn pairs_in_window(&self, max_each: usize) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for l1 in 1..=max_each.min(self.hc0.max_weight) {
            for l2 in 1..=max_each.min(self.hc0.max_weight) {
                for u in self.hc0.basis(l1) {
                    for v in self.hc0.basis(l2) {
                        out.push((u.clone(), v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Agreement with the necklace bracket on every pair of basis classes of
    /// weight at most `max_each`, for the free path algebra.
    pub fn check_against_necklace(&self, max_each: usize) -> Check {
        let name = "HC_0 bracket equals the necklace bracket";
        let mut witnesses = Vec::new();
        let (mut compared, mut skipped) = (0, 0);
        for (u, v) in self.pairs_in_window(max_each) {
            let ours = self.bracket(&nc_word(u.clone()), &nc_word(v.clone()));
            let theirs = self
                .spec
                .necklace_bracket(&crate::ncalg::to_cyclic(&nc_word(u.clone())), &crate::ncalg::to_cyclic(&nc_word(v.clone())))
                .and_then(|c| self.alg.normal_form(&c.lift()))
                .and_then(|x| self.hc0.reduce(&x));
            match (ours, theirs) {
                (Err(Error::Truncation(_)), _) | (_, Err(Error::Truncation(_))) => skipped += 1,
                (Ok(a), Ok(b)) => {
                    compared += 1;
                    if a != b {
                        witnesses.push(Witness {
                            input: format!("{}, {}", self.render(&nc_word(u.clone())), self.render(&nc_word(v.clone()))),
                            value: self.render(&(&a - &b)),
                            arity: 1,
                        });
                    }
                }
                (Err(e), _) | (_, Err(e)) => return Check::indeterminate(name, e.to_string()),
            }
        }
        if compared == 0 {
            return Check::indeterminate(name, format!("all {skipped} pairs left the exact window"));
        }
        Check::from_witnesses(name, format!("{compared} basis pairs of weight <= {max_each}, {skipped} outside the window"), witnesses)
    }

    /// Antisymmetry on all basis pairs and Jacobi on all basis triples whose
    /// computation stays inside the exact window.
    pub fn check_lie(&self, max_each: usize) -> Check {
        let name = "HC_0 bracket is a Lie bracket";
        let mut witnesses = Vec::new();
        let (mut pairs, mut triples, mut skipped) = (0, 0, 0);
        let pair_list = self.pairs_in_window(max_each);
        for (u, v) in &pair_list {
            let (x, y) = (nc_word(u.clone()), nc_word(v.clone()));
            match (self.bracket(&x, &y), self.bracket(&y, &x)) {
                (Ok(a), Ok(b)) => {
                    pairs += 1;
                    let sum = &a + &b;
                    if !sum.is_zero() {
                        witnesses.push(Witness { input: format!("{}, {}", self.render(&x), self.render(&y)), value: self.render(&sum), arity: 1 });
                    }
                }
                _ => skipped += 1,
            }
        }
        let singles: Vec<Word> = (1..=max_each.min(self.hc0.max_weight)).flat_map(|l| self.hc0.basis(l).to_vec()).collect();
        for a in &singles {
            for b in &singles {
                for c in &singles {
                    let (x, y, z) = (nc_word(a.clone()), nc_word(b.clone()), nc_word(c.clone()));
                    let jac = (|| -> Result<NC> {
                        let t1 = self.bracket(&x, &self.bracket(&y, &z)?)?;
                        let t2 = self.bracket(&y, &self.bracket(&z, &x)?)?;
                        let t3 = self.bracket(&z, &self.bracket(&x, &y)?)?;
                        Ok(&(&t1 + &t2) + &t3)
                    })();
                    match jac {
                        Ok(j) => {
                            triples += 1;
                            if !j.is_zero() {
                                witnesses.push(Witness {
                                    input: format!("{}, {}, {}", self.render(&x), self.render(&y), self.render(&z)),
                                    value: self.render(&j),
                                    arity: 1,
                                });
                            }
                        }
                        Err(_) => skipped += 1,
                    }
                }
            }
        }
        if pairs == 0 && triples == 0 && skipped == 0 {
            return Check::pass(name, format!("HC_0 basis is empty in weights 1..={}; the statement is vacuous", self.hc0.max_weight));
        }
        if pairs == 0 && triples == 0 {
            return Check::indeterminate(name, format!("{skipped} combinations left the exact window"));
        }
        Check::from_witnesses(name, format!("{pairs} pairs and {triples} triples; {skipped} outside the window"), witnesses)
    }

    /// The bracket does not depend on the cocycle chosen for a class: the
    /// letter lift, the whole-word lift and every two-generator split agree,
    /// and every bracket of lifts is again a cocycle.
    pub fn check_representatives(&self, max_each: usize) -> Check {
        let name = "HC_0 bracket is independent of representatives";
        let mut witnesses = Vec::new();
        let mut compared = 0;
        for (u, v) in self.pairs_in_window(max_each) {
            let (x, y) = (nc_word(u.clone()), nc_word(v.clone()));
            let Ok(reference) = self.bracket(&x, &y) else { continue };
            let mut lifts = vec![Lift::Whole];
            lifts.extend((1..u.len().max(v.len())).map(Lift::Split));
            for how in lifts {
                match (self.bracket_with(&x, &y, how), self.bracket_cocycle_defect(&u, &v, how)) {
                    (Ok(other), Ok(defect)) => {
                        compared += 1;
                        if other != reference || !defect.is_zero() {
                            witnesses.push(Witness {
                                input: format!("{}, {} lifted as {:?}", self.render(&x), self.render(&y), how),
                                value: self.render(&(&other - &reference)),
                                arity: 1,
                            });
                        }
                    }
                    _ => continue,
                }
            }
        }
        Check::from_witnesses(name, format!("{compared} alternative lifts"), witnesses)
    }
}

// ---------------------------------------------------------------------------
// Shifted brackets on 𝔰^d A

/// The double bracket and multiplication transported to `𝔰^d A` by
/// conjugation with `𝔰^d`. An element `𝔰^d u` is stored as the word `u`; its
/// degree is `|u| - d`.
pub struct Shifted<'a> {
    spec: &'a DoubleBracketSpec,
    d: i64,
}

impl<'a> Shifted<'a> {
    pub fn new(spec: &'a DoubleBracketSpec, d: i64) -> Shifted<'a> {
        Shifted { spec, d }
    }

    pub fn shift(&self) -> i64 {
        self.d
    }

    fn deg(&self, w: &Word) -> i64 {
        w.degree() - self.d
    }

    /// `(𝔰^d ⊗ 𝔰^d) ∘ ⟦-,-⟧ ∘ (𝔰^{-d} ⊗ 𝔰^{-d})` on `𝔰^d x ⊗ 𝔰^d y`:
    /// the sign is `(-1)^{d(|x|-d) + d|P|}` on each term `P ⊗ R` of `⟦x, y⟧`.
    pub fn pair(&self, x: &Word, y: &Word) -> Tensor {
        let d = self.d;
        self.spec.words(x, y).map_keys(|k| Some((k.clone(), sign_q(d * (x.degree() - d) + d * k[0].degree()))))
    }

    /// `m̃ = 𝔰^d ∘ m ∘ (𝔰^{-d} ⊗ 𝔰^{-d})`: `m̃(𝔰^d x ⊗ 𝔰^d y) = (-1)^{d(|x|-d)} 𝔰^d(xy)`.
    pub fn mult(&self, x: &Word, y: &Word) -> Option<(Word, i64)> {
        x.mul(y).map(|w| (w, sign_of(self.d * (x.degree() - self.d))))
    }

    fn permute_shifted(&self, t: &Tensor, perm: &[usize]) -> Tensor {
        t.map_keys(|k| {
            let degs: Vec<i64> = k.iter().map(|w| self.deg(w)).collect();
            Some((permute(k, perm), q(koszul_sign(&degs, perm))))
        })
    }

    fn pair_l(&self, x: &Word, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (k, c) in t.iter() {
            for (k2, c2) in self.pair(x, &k[0]).iter() {
                out.add_term(vec![k2[0].clone(), k2[1].clone(), k[1].clone()], c * c2);
            }
        }
        out
    }

    /// The double Jacobiator in shifted degrees.
    pub fn triple(&self, x: &Word, y: &Word, z: &Word) -> Tensor {
        let n = self.spec.degree();
        let (dx, dy, dz) = (self.deg(x), self.deg(y), self.deg(z));
        let mut out = self.pair_l(x, &self.pair(y, z));
        let t2 = self.permute_shifted(&self.pair_l(z, &self.pair(x, y)), &[1, 2, 0]);
        out.add_scaled(&t2, &sign_q((dz - n) * (dx + dy)));
        let t3 = self.permute_shifted(&self.pair_l(y, &self.pair(z, x)), &[2, 0, 1]);
        out.add_scaled(&t3, &sign_q((dx - n) * (dy + dz)));
        out
    }

    /// `⟦X, Y⟧ + (-1)^{(|X|-n)(|Y|-n)} τ⟦Y, X⟧` in shifted degrees.
    pub fn antisymmetry_defect(&self, x: &Word, y: &Word) -> Tensor {
        let n = self.spec.degree();
        let mut out = self.pair(x, y);
        let swapped = self.permute_shifted(&self.pair(y, x), &[1, 0]);
        out.add_scaled(&swapped, &sign_q((self.deg(x) - n) * (self.deg(y) - n)));
        out
    }

    /// Both sides of the twisted Leibniz identity on `X ⊗ Y ⊗ Z`:
    /// `⟦-,-⟧(id⊗m̃)(X⊗Y⊗Z) = (-1)^{d|X|} ⟦X, m̃(Y⊗Z)⟧` against
    /// `(-1)^{nd} (id⊗m̃)(⟦X,Y⟧⊗Z) + (-1)^{nd} (m̃⊗id)(id⊗⟦-,-⟧)(12)(X⊗Y⊗Z)`.
    pub fn twisted_leibniz_defect(&self, x: &Word, y: &Word, z: &Word) -> Tensor {
        let n = self.spec.degree();
        let d = self.d;
        let mut lhs = Tensor::zero();
        if let Some((yz, s)) = self.mult(y, z) {
            lhs.add_scaled(&self.pair(x, &yz), &q(s * sign_of(d * self.deg(x))));
        }
        let mut rhs = Tensor::zero();
        for (k, c) in self.pair(x, y).iter() {
            if let Some((w, s)) = self.mult(&k[1], z) {
                let koszul = sign_of(d * self.deg(&k[0]));
                rhs.add_term(vec![k[0].clone(), w], c * q(s * koszul * sign_of(n * d)));
            }
        }
        let swap = sign_of(self.deg(x) * self.deg(y));
        let through = sign_of(n * self.deg(y));
        for (k, c) in self.pair(x, z).iter() {
            if let Some((w, s)) = self.mult(y, &k[0]) {
                rhs.add_term(vec![w, k[1].clone()], c * q(s * swap * through * sign_of(n * d)));
            }
        }
        &lhs - &rhs
    }

    /// `{X, Y}_{𝔰^d A} = (-1)^d 𝔰^d {x, y}` on words.
    pub fn lie(&self, x: &Word, y: &Word) -> NC {
        crate::ncalg::tensor_mult(&self.spec.words(x, y)).scaled(&sign_q(self.d))
    }

    fn lie_linear(&self, x: &NC, y: &NC) -> NC {
        let mut out = NC::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                out.add_scaled(&self.lie(u, v), &(a * b));
            }
        }
        out
    }

    /// `m̃(U ⊗ V) - m̃τ(U ⊗ V)`.
    pub fn commutator(&self, u: &Word, v: &Word) -> NC {
        let mut out = NC::zero();
        if let Some((w, s)) = self.mult(u, v) {
            out.add_term(w, q(s));
        }
        if let Some((w, s)) = self.mult(v, u) {
            out.add_term(w, -q(s * sign_of(self.deg(u) * self.deg(v))));
        }
        out
    }
}

/// The subspace `[𝔰^d A, 𝔰^d A]` of `𝔰^d A` in path lengths `0..=max_weight`,
/// spanned by the twisted commutators of all pairs of words, units included.
pub struct ShiftedCyclic<'a> {
    shifted: Shifted<'a>,
    max_weight: usize,
    commutators: BTreeMap<usize, Echelon<Word>>,
}

impl<'a> ShiftedCyclic<'a> {
    pub fn new(spec: &'a DoubleBracketSpec, d: i64, max_weight: usize) -> ShiftedCyclic<'a> {
        let shifted = Shifted::new(spec, d);
        let q = spec.quiver();
        let words: Vec<Vec<Word>> = (0..=max_weight).map(|l| words_of_length(q.num_vertices(), &q.letters(), l)).collect();
        let mut commutators = BTreeMap::new();
        for weight in 0..=max_weight {
            let mut e = Echelon::new();
            for l in 0..=weight {
                for u in &words[l] {
                    for v in &words[weight - l] {
                        e.insert(&shifted.commutator(u, v));
                    }
                }
            }
            commutators.insert(weight, e);
        }
        ShiftedCyclic { shifted, max_weight, commutators }
    }

    /// Normal form modulo the commutator subspace.
    pub fn reduce(&self, x: &NC) -> Result<NC> {
        let mut out = NC::zero();
        let mut by_weight: BTreeMap<usize, NC> = BTreeMap::new();
        for (w, c) in x.iter() {
            by_weight.entry(w.len()).or_default().add_term(w.clone(), c.clone());
        }
        for (weight, part) in by_weight {
            let e = self
                .commutators
                .get(&weight)
                .ok_or_else(|| Error::Truncation(format!("commutators computed through weight {}", self.max_weight)))?;
            out.add_assign(&e.reduce(&part));
        }
        Ok(out)
    }

    /// Dimension of `(𝔰^d A)_cyc` in one weight.
    pub fn dim(&self, weight: usize) -> usize {
        let q = self.shifted.spec.quiver();
        let total = words_of_length(q.num_vertices(), &q.letters(), weight).len();
        total - self.commutators.get(&weight).map_or(0, Echelon::rank)
    }

    /// On sampled words: the bracket preserves the commutator subspace in
    /// both slots, is antisymmetric, and satisfies Jacobi, all modulo the
    /// commutator subspace, for the Lie algebra of degree `n - d`.
    pub fn check_lie(&self, samples: usize, seed: u64, max_len: usize) -> Check {
        let name = "shifted cyclic quotient is a Lie algebra";
        let q = self.shifted.spec.quiver();
        let k = self.shifted.spec.degree() - self.shifted.d;
        let mut rng = Sampler::new(seed);
        let mut witnesses = Vec::new();
        let mut done = 0;
        let render = |x: &NC| render_nc(q, x);
        for _ in 0..samples {
            let (Some(x), Some(y), Some(z)) = (rng.word(q, max_len), rng.word(q, max_len), rng.word(q, max_len)) else { continue };
            let (dx, dy) = (self.shifted.deg(&x) - k, self.shifted.deg(&y) - k);
            let (nx, ny, nz) = (nc_word(x.clone()), nc_word(y.clone()), nc_word(z.clone()));
            let b = |a: &NC, c: &NC| self.shifted.lie_linear(a, c);
            let anti = &b(&nx, &ny) + &b(&ny, &nx).scaled(&sign_q(dx * dy));
            let jac = &(&b(&nx, &b(&ny, &nz)) - &b(&b(&nx, &ny), &nz)) - &b(&ny, &b(&nx, &nz)).scaled(&sign_q(dx * dy));
            let comm = self.shifted.commutator(&y, &z);
            let left = b(&comm, &nx);
            let right = b(&nx, &comm);
            let checks = [("antisymmetry", anti), ("Jacobi", jac), ("left ideal", left), ("right ideal", right)];
            let mut failed = false;
            for (label, value) in checks {
                match self.reduce(&value) {
                    Ok(r) if r.is_zero() => {}
                    Ok(r) => {
                        failed = true;
                        witnesses.push(Witness {
                            input: format!("{label}: {}, {}, {}", render(&nx), render(&ny), render(&nz)),
                            value: render(&r),
                            arity: 1,
                        });
                    }
                    Err(e) => return Check::indeterminate(name, e.to_string()),
                }
            }
            if !failed {
                done += 1;
            }
        }
        Check::from_witnesses(name, format!("d = {}, {done} clean samples of {samples}", self.shifted.d), witnesses)
    }
}

/// Antisymmetry and double Jacobi of the shifted bracket on all generator
/// pairs and triples, and twisted Leibniz on sampled word triples.
pub fn shifted_report(spec: &DoubleBracketSpec, d: i64, samples: usize, seed: u64) -> Report {
    let sh = Shifted::new(spec, d);
    let q = spec.quiver();
    let gens: Vec<Word> = spec.generators().into_iter().map(Word::letter).collect();
    let mut report = Report::new("shifted-bracket");
    report.param("d", d);
    let render_t = |t: &Tensor| crate::expr::render_tensor(q, t);
    let mut anti = Vec::new();
    let mut jac = Vec::new();
    for x in &gens {
        for y in &gens {
            let a = sh.antisymmetry_defect(x, y);
            if !a.is_zero() {
                anti.push(Witness { input: format!("{}, {}", render_word(q, x), render_word(q, y)), value: render_t(&a), arity: 2 });
            }
            for z in &gens {
                let j = sh.triple(x, y, z);
                if !j.is_zero() {
                    jac.push(Witness {
                        input: format!("{}, {}, {}", render_word(q, x), render_word(q, y), render_word(q, z)),
                        value: render_t(&j),
                        arity: 3,
                    });
                }
            }
        }
    }
    report.push(Check::from_witnesses("shifted antisymmetry", format!("{} generator pairs", gens.len().pow(2)), anti));
    report.push(Check::from_witnesses("shifted double Jacobi", format!("{} generator triples", gens.len().pow(3)), jac));
    let mut rng = Sampler::new(seed);
    let mut leib = Vec::new();
    for _ in 0..samples {
        let (Some(x), Some(y), Some(z)) = (rng.word(q, 3), rng.word(q, 3), rng.word(q, 3)) else { continue };
        let t = sh.twisted_leibniz_defect(&x, &y, &z);
        if !t.is_zero() {
            leib.push(Witness {
                input: format!("{}, {}, {}", render_word(q, &x), render_word(q, &y), render_word(q, &z)),
                value: render_t(&t),
                arity: 2,
            });
        }
    }
    report.push(Check::from_witnesses("twisted Leibniz", format!("{samples} sampled triples"), leib));
    report
}

// ---------------------------------------------------------------------------
// The extended bracket on 𝔰A⟨t⟩ and on the cobar construction

/// A symbol of `𝔰A⟨t⟩`: a suspended word `𝔰u` or the separator `t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sym {
    S(Word),
    T,
}

pub type TWord = Vec<Sym>;
type Pair<G> = Lin<(Vec<G>, Vec<G>)>;

/// A double bracket on a monoid of words, extended from its values on
/// symbols by the Leibniz rule in the second slot and antisymmetry.
type Join<'f, G> = &'f dyn Fn(&[G], &[G]) -> Option<(Vec<G>, i64)>;

struct Leibniz<'f, G: Ord + Clone> {
    n: i64,
    degree: &'f dyn Fn(&G) -> i64,
    pair: &'f dyn Fn(&G, &G) -> Pair<G>,
    join: Join<'f, G>,
}

impl<G: Ord + Clone> Leibniz<'_, G> {
    fn word_degree(&self, w: &[G]) -> i64 {
        w.iter().map(|g| (self.degree)(g)).sum()
    }

    /// `prefix ∗ (P ⊗ R) ∗ suffix = (prefix ∗ P) ⊗ (R ∗ suffix)`.
    fn outer(&self, prefix: &[G], p: &Pair<G>, suffix: &[G]) -> Pair<G> {
        let mut out = Pair::zero();
        for ((a, b), c) in p.iter() {
            if let (Some((l, s1)), Some((r, s2))) = ((self.join)(prefix, a), (self.join)(b, suffix)) {
                out.add_term((l, r), c * q(s1 * s2));
            }
        }
        out
    }

    fn swap(&self, p: &Pair<G>) -> Pair<G> {
        p.map_keys(|(a, b)| Some(((b.clone(), a.clone()), q(sign_of(self.word_degree(a) * self.word_degree(b))))))
    }

    fn gen_word(&self, g: &G, x: &[G]) -> Pair<G> {
        let mut out = Pair::zero();
        let mut prefix = 0;
        for i in 0..x.len() {
            let inner = (self.pair)(g, &x[i]);
            if !inner.is_zero() {
                out.add_scaled(&self.outer(&x[..i], &inner, &x[i + 1..]), &sign_q(prefix * ((self.degree)(g) - self.n)));
            }
            prefix += (self.degree)(&x[i]);
        }
        out
    }

    fn word_gen(&self, x: &[G], h: &G) -> Pair<G> {
        if x.len() == 1 {
            return (self.pair)(&x[0], h);
        }
        let s = -sign_of((self.word_degree(x) - self.n) * ((self.degree)(h) - self.n));
        self.swap(&self.gen_word(h, x)).scaled(&q(s))
    }

    fn bracket(&self, x: &[G], y: &[G]) -> Pair<G> {
        let mut out = Pair::zero();
        if x.is_empty() || y.is_empty() {
            return out;
        }
        let xd = self.word_degree(x);
        let mut prefix = 0;
        for j in 0..y.len() {
            let inner = self.word_gen(x, &y[j]);
            if !inner.is_zero() {
                out.add_scaled(&self.outer(&y[..j], &inner, &y[j + 1..]), &sign_q(prefix * (xd - self.n)));
            }
            prefix += (self.degree)(&y[j]);
        }
        out
    }
}

fn weights_for(i: usize, both_separated: bool) -> (usize, usize) {
    match (i % 4, both_separated) {
        (0, _) => (1, 1),
        (1, _) => (2, 1),
        (2, _) => (1, 2),
        (_, true) => (2, 2),
        (_, false) => (1, 1),
    }
}

fn sym_degree(g: &Sym) -> i64 {
    match g {
        Sym::S(a) => a.degree() - 1,
        Sym::T => 0,
    }
}

/// `a ∗ b`: concatenation, merging a trailing `𝔰u` with a leading `𝔰v`
/// by `𝔰u ∗ 𝔰v = (-1)^{|u|+1} 𝔰(uv)`.
fn star(a: &[Sym], b: &[Sym]) -> Option<(TWord, i64)> {
    match (a.last(), b.first()) {
        (Some(Sym::S(u)), Some(Sym::S(v))) => {
            let uv = u.mul(v)?;
            let mut out = a[..a.len() - 1].to_vec();
            out.push(Sym::S(uv));
            out.extend_from_slice(&b[1..]);
            Some((out, sign_of(u.degree() + 1)))
        }
        _ => Some(([a, b].concat(), 1)),
    }
}

/// The bar word `𝔰a_1 t 𝔰a_2 … t 𝔰a_k` as a word of symbols.
pub fn to_tword(x: &[Word]) -> TWord {
    let mut out = Vec::new();
    for (i, a) in x.iter().enumerate() {
        if i > 0 {
            out.push(Sym::T);
        }
        out.push(Sym::S(a.clone()));
    }
    out
}

/// `b` on words of symbols: every separator between two suspended words
/// multiplies them, with the sign `(-1)^{|prefix through 𝔰a|+1}`.
pub fn tword_b(w: &[Sym]) -> Lin<TWord> {
    let mut out = Lin::zero();
    let mut prefix = 0;
    for i in 0..w.len() {
        prefix += sym_degree(&w[i]);
        if let (Sym::S(a), Some(Sym::T), Some(Sym::S(b))) = (&w[i], w.get(i + 1), w.get(i + 2)) {
            if let Some(ab) = a.mul(b) {
                let mut key = w[..i].to_vec();
                key.push(Sym::S(ab));
                key.extend_from_slice(&w[i + 3..]);
                out.add_term(key, sign_q(prefix + 1));
            }
        }
    }
    out
}

pub fn render_tword(quiver: &Quiver, w: &[Sym]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|g| match g {
            Sym::S(a) => format!("s({})", render_word(quiver, a)),
            Sym::T => "t".into(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_tpair(quiver: &Quiver, p: &Pair<Sym>) -> String {
    render_terms(p, |(a, b)| format!("{} # {}", render_tword(quiver, a), render_tword(quiver, b)))
}

fn render_cobar_tpair(quiver: &Quiver, p: &Pair<TWord>) -> String {
    let side = |x: &Vec<TWord>| x.iter().map(|w| format!("<{}>", render_tword(quiver, w))).collect::<Vec<_>>().join(" ");
    render_terms(p, |(a, b)| format!("{} # {}", side(a), side(b)))
}

/// The double bracket of a one-vertex algebra extended to `𝔰A⟨t⟩` with
/// `Θ = 0` for the separator: `⟦𝔰x, 𝔰y⟧` is the conjugated bracket for
/// `d = 1`, `⟦t, t⟧ = t ⊗ 1 - 1 ⊗ t` and `⟦t, 𝔰x⟧ = 0`. Words of the
/// unreduced `𝔰A⟨t⟩` are allowed, so idempotent values such as `𝔰e` stay
/// visible.
pub struct ExtendedBracket<'a> {
    spec: &'a DoubleBracketSpec,
    separator: SeparatorBracket,
}

/// The value of `⟦t, t⟧` for the separator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparatorBracket {
    /// `t ⊗ 1 - 1 ⊗ t`, the Poisson extension with `Θ = 0`.
    Extension,
    /// `0`.
    Zero,
}

impl<'a> ExtendedBracket<'a> {
    pub fn new(spec: &'a DoubleBracketSpec) -> Result<ExtendedBracket<'a>> {
        Self::with_separator(spec, SeparatorBracket::Extension)
    }

    pub fn with_separator(spec: &'a DoubleBracketSpec, separator: SeparatorBracket) -> Result<ExtendedBracket<'a>> {
        if spec.quiver().num_vertices() != 1 {
            return Err(Error::Unsupported("the extended bracket is implemented for one-vertex quivers".into()));
        }
        Ok(ExtendedBracket { spec, separator })
    }

    fn sym_pair(&self, g: &Sym, h: &Sym) -> Pair<Sym> {
        match (g, h) {
            (Sym::S(x), Sym::S(y)) => {
                let mut out = Pair::zero();
                for (k, c) in self.spec.words(x, y).iter() {
                    let s = sign_of(x.degree() - 1 + k[0].degree());
                    out.add_term((vec![Sym::S(k[0].clone())], vec![Sym::S(k[1].clone())]), c * q(s));
                }
                out
            }
            (Sym::T, Sym::T) if self.separator == SeparatorBracket::Extension => {
                let mut out = Pair::zero();
                out.add_term((vec![Sym::T], vec![]), q(1));
                out.add_term((vec![], vec![Sym::T]), q(-1));
                out
            }
            _ => Pair::zero(),
        }
    }

    /// `⟦X, Y⟧` on words of symbols.
    pub fn bracket(&self, x: &[Sym], y: &[Sym]) -> Pair<Sym> {
        let pair = |g: &Sym, h: &Sym| self.sym_pair(g, h);
        let l = Leibniz { n: self.spec.degree(), degree: &sym_degree, pair: &pair, join: &star };
        l.bracket(x, y)
    }

    fn b_pair(&self, p: &Pair<Sym>) -> Pair<Sym> {
        let mut out = Pair::zero();
        for ((a, b), c) in p.iter() {
            for (a2, c2) in tword_b(a).iter() {
                out.add_term((a2.clone(), b.clone()), c * c2);
            }
            let s = sign_q(a.iter().map(sym_degree).sum());
            for (b2, c2) in tword_b(b).iter() {
                out.add_term((a.clone(), b2.clone()), c * c2 * &s);
            }
        }
        out
    }

    fn bracket_linear(&self, x: &Lin<TWord>, y: &Lin<TWord>) -> Pair<Sym> {
        let mut out = Pair::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                out.add_scaled(&self.bracket(u, v), &(a * b));
            }
        }
        out
    }

    /// `b⟦X, Y⟧ - ⟦bX, Y⟧ - (-1)^{|X|+n} ⟦X, bY⟧`.
    pub fn b_defect(&self, x: &[Sym], y: &[Sym]) -> Pair<Sym> {
        let n = self.spec.degree();
        let xd: i64 = x.iter().map(sym_degree).sum();
        let lhs = self.b_pair(&self.bracket(x, y));
        let r1 = self.bracket_linear(&tword_b(x), &Lin::basis(y.to_vec()));
        let r2 = self.bracket_linear(&Lin::basis(x.to_vec()), &tword_b(y)).scaled(&sign_q(xd + n));
        &(&lhs - &r1) - &r2
    }

    fn cobar_gen_degree(x: &TWord) -> i64 {
        x.iter().map(sym_degree).sum::<i64>() + 1
    }

    /// `⟦𝔰⁻¹X, 𝔰⁻¹Y⟧ = (-1)^{|𝔰⁻¹X|} (𝔰⁻¹ ⊗ 𝔰⁻¹)⟦X, Y⟧`. Terms with an empty
    /// factor have no desuspension and are reported through `overflow`.
    fn cobar_pair(&self, x: &TWord, y: &TWord, overflow: &std::cell::Cell<bool>) -> Pair<TWord> {
        let mut out = Pair::zero();
        for ((p, r), c) in self.bracket(x, y).iter() {
            if p.is_empty() || r.is_empty() {
                overflow.set(true);
                continue;
            }
            let s = Self::cobar_gen_degree(x) + p.iter().map(sym_degree).sum::<i64>();
            out.add_term((vec![p.clone()], vec![r.clone()]), c * sign_q(s));
        }
        out
    }

    fn cobar_bracket(&self, a: &[TWord], b: &[TWord], overflow: &std::cell::Cell<bool>) -> Pair<TWord> {
        let pair = |g: &TWord, h: &TWord| self.cobar_pair(g, h, overflow);
        let join = |u: &[TWord], v: &[TWord]| Some(([u, v].concat(), 1));
        let l = Leibniz { n: self.spec.degree(), degree: &Self::cobar_gen_degree, pair: &pair, join: &join };
        l.bracket(a, b)
    }

    /// `∂ + δ` on a cobar word over words of symbols.
    fn cobar_d(&self, x: &[TWord]) -> Lin<Vec<TWord>> {
        let mut out = Lin::zero();
        let mut prefix = 0;
        for (i, c) in x.iter().enumerate() {
            for (c2, coeff) in tword_b(c).iter() {
                let mut key = x[..i].to_vec();
                key.push(c2.clone());
                key.extend_from_slice(&x[i + 1..]);
                out.add_term(key, coeff * sign_q(prefix + 1));
            }
            for j in 0..c.len() {
                if c[j] != Sym::T {
                    continue;
                }
                let (c1, c2) = (c[..j].to_vec(), c[j + 1..].to_vec());
                let s = prefix + Self::cobar_gen_degree(&c1);
                let mut key = x[..i].to_vec();
                key.push(c1);
                key.push(c2);
                key.extend_from_slice(&x[i + 1..]);
                out.add_term(key, sign_q(s));
            }
            prefix += Self::cobar_gen_degree(c);
        }
        out
    }

    fn cobar_d_pair(&self, p: &Pair<TWord>) -> Pair<TWord> {
        let mut out = Pair::zero();
        for ((a, b), c) in p.iter() {
            for (a2, c2) in self.cobar_d(a).iter() {
                out.add_term((a2.clone(), b.clone()), c * c2);
            }
            let s = sign_q(a.iter().map(Self::cobar_gen_degree).sum());
            for (b2, c2) in self.cobar_d(b).iter() {
                out.add_term((a.clone(), b2.clone()), c * c2 * &s);
            }
        }
        out
    }

    /// `D⟦A, B⟧ - ⟦DA, B⟧ - (-1)^{|A|+n} ⟦A, DB⟧` for `A = 𝔰⁻¹X`, `B = 𝔰⁻¹Y`
    /// and `D = ∂ + δ`. `None` when a bracket term has an empty factor.
    pub fn cobar_defect(&self, x: &TWord, y: &TWord) -> Option<Pair<TWord>> {
        let n = self.spec.degree();
        let overflow = std::cell::Cell::new(false);
        let (a, b) = (vec![x.clone()], vec![y.clone()]);
        let lhs = self.cobar_d_pair(&self.cobar_bracket(&a, &b, &overflow));
        let mut r1 = Pair::zero();
        for (da, c) in self.cobar_d(&a).iter() {
            r1.add_scaled(&self.cobar_bracket(da, &b, &overflow), c);
        }
        let mut r2 = Pair::zero();
        for (db, c) in self.cobar_d(&b).iter() {
            r2.add_scaled(&self.cobar_bracket(&a, db, &overflow), c);
        }
        let r2 = r2.scaled(&sign_q(Self::cobar_gen_degree(x) + n));
        if overflow.get() {
            return None;
        }
        Some(&(&lhs - &r1) - &r2)
    }

    fn sample_bar(&self, rng: &mut Sampler, weight: usize, max_len: usize) -> Option<TWord> {
        let q = self.spec.quiver();
        let words: Option<Vec<Word>> = (0..weight).map(|_| rng.word(q, max_len)).collect();
        words.map(|w| to_tword(&w))
    }

    /// Compatibility of the bracket with `b` on sampled bar words of weight
    /// at most two. With `both_separated` false at most one of the two
    /// arguments contains a separator.
    pub fn check_b_compatibility(&self, samples: usize, seed: u64, both_separated: bool) -> Check {
        let q = self.spec.quiver();
        let mut rng = Sampler::new(seed);
        let mut witnesses = Vec::new();
        for i in 0..samples {
            let (wx, wy) = weights_for(i, both_separated);
            let (Some(x), Some(y)) = (self.sample_bar(&mut rng, wx, 2), self.sample_bar(&mut rng, wy, 2)) else { continue };
            let defect = self.b_defect(&x, &y);
            if !defect.is_zero() {
                witnesses.push(Witness {
                    input: format!("{}, {}", render_tword(q, &x), render_tword(q, &y)),
                    value: render_tpair(q, &defect),
                    arity: 0,
                });
            }
        }
        let shape = if both_separated { "separators on both sides allowed" } else { "separators on one side" };
        Check::from_witnesses("extended bracket commutes with b", format!("{samples} sampled pairs, {shape}"), witnesses)
    }

    /// Compatibility of the cobar bracket with `∂ + δ` on sampled generators
    /// `𝔰⁻¹X`, `𝔰⁻¹Y` of weight at most two, with the same sampling shapes
    /// as [`ExtendedBracket::check_b_compatibility`].
    pub fn check_cobar_compatibility(&self, samples: usize, seed: u64, both_separated: bool) -> Check {
        let q = self.spec.quiver();
        let mut rng = Sampler::new(seed);
        let mut witnesses = Vec::new();
        let mut skipped = 0;
        for i in 0..samples {
            let (wx, wy) = weights_for(i, both_separated);
            let (Some(x), Some(y)) = (self.sample_bar(&mut rng, wx, 2), self.sample_bar(&mut rng, wy, 2)) else { continue };
            match self.cobar_defect(&x, &y) {
                None => skipped += 1,
                Some(defect) if !defect.is_zero() => witnesses.push(Witness {
                    input: format!("<{}>, <{}>", render_tword(q, &x), render_tword(q, &y)),
                    value: render_cobar_tpair(q, &defect),
                    arity: 0,
                }),
                _ => {}
            }
        }
        Check::from_witnesses(
            "cobar bracket commutes with the cobar differential",
            format!("{samples} sampled pairs, {skipped} with an empty bracket factor"),
            witnesses,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbracket::standard_moment;

    fn jordan_spec() -> DoubleBracketSpec {
        DoubleBracketSpec::standard(&Quiver::jordan().double(0).unwrap()).unwrap()
    }

    fn a2_spec() -> DoubleBracketSpec {
        DoubleBracketSpec::standard(&Quiver::a2().double(0).unwrap()).unwrap()
    }

    fn preprojective(spec: &DoubleBracketSpec, bound: usize) -> Reduction {
        Reduction::new(spec.quiver(), &standard_moment(spec.quiver()), None, bound).unwrap()
    }

    fn word(q: &Quiver, s: &str) -> Word {
        let x = crate::expr::parse_nc(q, s).unwrap();
        assert_eq!(x.len(), 1);
        let w = x.keys().next().unwrap().clone();
        w
    }

    fn free_xy() -> PathAlgebra {
        PathAlgebra::new(Quiver::loops(&["x", "y"]))
    }

    #[test]
    fn bar_differential_merges_adjacent_entries() {
        let free = free_xy();
        let x = word(free.quiver(), "x");
        let d = bar_differential(&free, &[x.clone(), x.clone()]).unwrap();
        assert_eq!(render_bar_element(free.quiver(), &d), "[x.x]");
        let dn = dual_numbers().unwrap();
        let x = word(dn.quiver(), "x");
        assert!(bar_differential(&dn, &[x.clone(), x]).unwrap().is_zero());
    }

    #[test]
    fn cobar_differential_on_a_pair() {
        let free = free_xy();
        let (x, y) = (word(free.quiver(), "x"), word(free.quiver(), "y"));
        let d = cobar_differential(&free, &[vec![x, y]]).unwrap();
        assert_eq!(render_cobar_element(free.quiver(), &d), "[x] (x) [y] - [x.y]");
    }

    #[test]
    fn squares_vanish_on_full_bases() {
        let a2 = a2_spec();
        let algebras: Vec<Box<dyn GradedAlgebra>> =
            vec![Box::new(dual_numbers().unwrap()), Box::new(preprojective(&a2, 4)), Box::new(free_xy())];
        for alg in &algebras {
            assert!(check_bar_square(alg.as_ref(), 4).unwrap().passed());
            assert!(check_cobar_square(alg.as_ref(), 4).unwrap().passed());
        }
    }

    #[test]
    fn squares_vanish_on_random_elements() {
        let free = free_xy();
        let mut rng = Sampler::new(0);
        for _ in 0..200 {
            let weight = rng.range(2, 4);
            let bars = bar_basis(&free, weight);
            let cobars = cobar_basis(&free, weight);
            let mut x = BarElement::zero();
            let mut y = CobarElement::zero();
            for _ in 0..3 {
                x.add_term(rng.choose(&bars).unwrap().clone(), q(rng.coefficient()));
                y.add_term(rng.choose(&cobars).unwrap().clone(), q(rng.coefficient()));
            }
            assert!(bar_linear(&free, &bar_linear(&free, &x).unwrap()).unwrap().is_zero());
            assert!(cobar_linear(&free, &cobar_linear(&free, &y).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn cobar_bar_resolves_the_algebra() {
        let a2 = a2_spec();
        let semisimple = PathAlgebra::new(Quiver::new(["0"]).unwrap());
        let algebras: Vec<Box<dyn GradedAlgebra>> = vec![
            Box::new(dual_numbers().unwrap()),
            Box::new(preprojective(&a2, 4)),
            Box::new(free_xy()),
            Box::new(semisimple),
        ];
        for alg in &algebras {
            let report = bar_cobar_report(alg.as_ref(), 4).unwrap();
            assert!(report.all_pass(), "{}", report.render_text());
        }
        let dn = dual_numbers().unwrap();
        let h: Vec<usize> = (1..=4).map(|l| cobar_cohomology(&dn, l).unwrap().get(&0).copied().unwrap_or(0)).collect();
        assert_eq!(h, vec![1, 0, 0, 0]);
    }

    #[test]
    fn counit_multiplies_generators() {
        let free = free_xy();
        let (x, y) = (word(free.quiver(), "x"), word(free.quiver(), "y"));
        let e = counit(&free, &[vec![x.clone()], vec![y.clone()]]).unwrap();
        assert_eq!(e, nc_word(x.mul(&y).unwrap()));
        assert!(counit(&free, &[vec![x, y]]).unwrap().is_zero());
    }

    #[test]
    fn connes_homology_of_free_algebra_counts_necklaces() {
        let table = connes_homology(&free_xy(), 6, 0, 3).unwrap();
        let h0: Vec<usize> = (1..=6).map(|l| table.dim(l, 0).unwrap()).collect();
        assert_eq!(h0, vec![2, 3, 4, 6, 8, 14]);
        for n in 1..=3 {
            assert_eq!(table.total(n), 0);
        }
        assert!(check_connes_square(&free_xy(), 5, 3).unwrap().passed());
    }

    #[test]
    fn connes_homology_of_a2_preprojective() {
        let a2 = a2_spec();
        let table = connes_homology(&preprojective(&a2, 8), 6, 0, 4).unwrap();
        for weight in 1..=6 {
            for n in 0..=4 {
                let expected = match (weight, n) {
                    (2, 1) | (4, 3) => 1,
                    _ => 0,
                };
                assert_eq!(table.dim(weight, n), Some(expected), "weight {weight}, n {n}");
            }
        }
    }

    #[test]
    fn connes_homology_of_semisimple_vanishes() {
        let s = PathAlgebra::new(Quiver::new(["0"]).unwrap());
        let table = connes_homology(&s, 4, 0, 3).unwrap();
        assert!((0..=3).all(|n| table.total(n) == 0));
    }

    #[test]
    fn cyclic_operator_sign() {
        let free = free_xy();
        let (x, y) = (word(free.quiver(), "x"), word(free.quiver(), "y"));
        let (c, s) = cyclic_operator(&[x.clone(), y.clone()]);
        assert_eq!(c, vec![y, x]);
        assert_eq!(s, -1);
    }

    #[test]
    fn hc_bracket_matches_necklace_bracket_on_free_jordan() {
        let j = jordan_spec();
        let fj = PathAlgebra::new(j.quiver().clone());
        let hb = HcBracket::new(&fj, &j, 8).unwrap();
        let check = hb.check_against_necklace(4);
        assert!(check.passed(), "{check:?}");
        assert!(hb.check_lie(3).passed());
        assert!(hb.check_representatives(3).passed());
    }

    #[test]
    fn hc_bracket_on_jordan_preprojective() {
        let j = jordan_spec();
        let pj = preprojective(&j, 8);
        let hb = HcBracket::new(&pj, &j, 8).unwrap();
        let dims: Vec<usize> = (1..=8).map(|l| hb.hc0().basis(l).len()).collect();
        assert_eq!(dims, vec![2, 3, 4, 5, 6, 7, 8, 9]);
        assert!(hb.check_lie(3).passed());
        assert!(hb.check_representatives(3).passed());
    }

    #[test]
    fn hc_bracket_on_a2_preprojective_has_nothing_to_bracket() {
        let a2 = a2_spec();
        let pa2 = preprojective(&a2, 4);
        let hb = HcBracket::new(&pa2, &a2, 4).unwrap();
        assert!((1..=4).all(|l| hb.hc0().basis(l).is_empty()));
        assert!(hb.check_lie(4).passed());
    }

    #[test]
    fn shift_zero_is_the_original_bracket() {
        let j = jordan_spec();
        let sh = Shifted::new(&j, 0);
        let q = j.quiver();
        for (u, v) in [("a", "a*"), ("a.a*", "a"), ("a*.a", "a*.a*")] {
            let (u, v) = (word(q, u), word(q, v));
            assert_eq!(sh.pair(&u, &v), j.words(&u, &v));
        }
    }

    #[test]
    fn shift_one_pairs_dual_generators_to_units() {
        let j = jordan_spec();
        let sh = Shifted::new(&j, 1);
        let q = j.quiver();
        let (a, s) = (word(q, "a"), word(q, "a*"));
        let t = |x: &str| crate::expr::parse_tensor(q, x, 2).unwrap();
        assert_eq!(sh.pair(&a, &s), t("-e(0) # e(0)"));
        assert_eq!(sh.pair(&s, &a), t("e(0) # e(0)"));
        assert!(sh.pair(&a, &a).is_zero());
    }

    #[test]
    fn shifted_brackets_satisfy_the_identities() {
        let j = jordan_spec();
        for d in [0, 1, 2, -1] {
            let report = shifted_report(&j, d, 100, 0);
            assert!(report.all_pass(), "{}", report.render_text());
            let sc = ShiftedCyclic::new(&j, d, 5);
            let dims: Vec<usize> = (0..=5).map(|l| sc.dim(l)).collect();
            if d % 2 == 0 {
                assert_eq!(dims, vec![1, 2, 3, 4, 6, 8]);
            } else {
                assert_eq!(dims, vec![0; 6]);
            }
            assert!(sc.check_lie(50, 0, 2).passed());
        }
    }

    #[test]
    fn odd_shift_makes_squares_commutators() {
        let j = jordan_spec();
        let sh = Shifted::new(&j, 1);
        let a = word(j.quiver(), "a");
        let c = sh.commutator(&a, &a);
        assert!(!c.is_zero());
    }

    #[test]
    fn extended_bracket_commutes_with_b_on_representatives() {
        let j = jordan_spec();
        let eb = ExtendedBracket::new(&j).unwrap();
        assert!(eb.check_b_compatibility(100, 0, false).passed());
        assert!(eb.check_cobar_compatibility(100, 0, false).passed());
    }

    #[test]
    fn extended_bracket_fails_with_separators_on_both_sides() {
        let j = jordan_spec();
        let eb = ExtendedBracket::new(&j).unwrap();
        let check = eb.check_b_compatibility(100, 0, true);
        assert!(!check.passed());
        assert!(check.witnesses.iter().all(|w| w.value.starts_with('2') || w.value.starts_with("-2")));
    }

    #[test]
    fn zero_separator_bracket_commutes_everywhere() {
        let j = jordan_spec();
        let eb = ExtendedBracket::with_separator(&j, SeparatorBracket::Zero).unwrap();
        assert!(eb.check_b_compatibility(100, 0, true).passed());
        assert!(eb.check_cobar_compatibility(100, 0, true).passed());
    }

    #[test]
    fn extended_bracket_needs_one_vertex() {
        let a2 = a2_spec();
        assert!(ExtendedBracket::new(&a2).is_err());
    }
}
