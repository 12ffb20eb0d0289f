//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use ncpoisson::barcobar::{
    check_bar_square, check_cobar_square, check_resolution, connes_homology, dual_numbers, HcBracket, PathAlgebra,
};
use ncpoisson::cotangent::CotangentAlgebra;
use ncpoisson::dbracket::{check_necklace_oracle, moment_components, standard_moment, DoubleBracketSpec};
use ncpoisson::expr::parse_nc;
use ncpoisson::extension::{extend_double, DoubleDerivation};
use ncpoisson::hamred::Reduction;
use ncpoisson::quiver::Quiver;
use ncpoisson::rep::{check_trace_lie_morphism, poly_const, Cube, RepBracket, RepScheme};
use ncpoisson::report::Check;
use ncpoisson::Q;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("examples-data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn standard(base: Quiver) -> DoubleBracketSpec {
    DoubleBracketSpec::standard(&base.double(0).unwrap()).unwrap()
}

fn preprojective(spec: &DoubleBracketSpec, bound: usize) -> Reduction {
    Reduction::new(spec.quiver(), &standard_moment(spec.quiver()), None, bound).unwrap()
}

fn require(check: Check) -> Outcome {
    if check.passed() {
        Ok(format!("{}: {}", check.name, check.detail))
    } else {
        let w = check.witnesses.first().map(|w| format!("{} = {}", w.input, w.value)).unwrap_or_default();
        Err(format!("{} {}: {} [{w}]", check.status, check.name, check.detail))
    }
}

fn all(checks: impl IntoIterator<Item = Check>) -> Outcome {
    let mut details = Vec::new();
    for c in checks {
        details.push(require(c)?);
    }
    Ok(details.join("; "))
}

fn cli(args: &[&str]) -> i32 {
    let mut sink = Vec::new();
    let argv: Vec<&str> = std::iter::once("ncpoisson").chain(args.iter().copied()).collect();
    ncpoisson_cli::run(argv, &mut sink)
}

fn standard_bracket_validity() -> Outcome {
    for file in ["jordan.json", "a3.json"] {
        let code = cli(&["verify-dpoisson", &data(file)]);
        if code != 0 {
            return Err(format!("verify-dpoisson {file} exited {code}"));
        }
    }
    all([standard(Quiver::jordan()), standard(Quiver::a3_framed())]
        .iter()
        .flat_map(|s| [s.check_antisymmetry(), s.check_jacobi_generators()]))
}

fn moment_map() -> Outcome {
    let spec = standard(Quiver::a3_framed());
    let q = spec.quiver().clone();
    let w = standard_moment(&q);
    require(spec.check_moment(&w))?;
    let comps = moment_components(&q, &w);
    let expected = [
        ("0", "-a0*.a0 + a2.a2* + p.p*"),
        ("1", "a0.a0* - a1*.a1"),
        ("2", "a1.a1* - a2*.a2"),
        ("inf", "-p*.p"),
    ];
    for (v, e) in expected {
        let i = q.vertex_index(v).unwrap() as usize;
        if comps[i] != parse_nc(&q, e).unwrap() {
            return Err(format!("component at vertex {v} differs from {e}"));
        }
    }
    Ok(format!("{} generators; w_0, w_1, w_2, w_inf match term by term", q.letters().len()))
}

fn representation_bracket() -> Outcome {
    let spec = standard(Quiver::jordan());
    let q = spec.quiver().clone();
    let (a, s) = (q.arrow_id("a").unwrap(), q.arrow_id("a*").unwrap());
    let mut pairs = 0;
    for n in [2, 3] {
        let rb = RepBracket::new(&spec, &RepScheme::new(&q, &[n]).unwrap()).unwrap();
        let sc = rb.scheme();
        for (i, j, u, v) in (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).flat_map(move |u| (0..n).map(move |v| (i, j, u, v))))) {
            let got = rb.var_bracket(&sc.var(s, i, j), &sc.var(a, u, v));
            let delta = i64::from(u == j && i == v);
            if got != poly_const(Q::from_integer((-delta).into())) {
                return Err(format!("N = {n}: {{a*[{i},{j}], a[{u},{v}]}} = {}", sc.render(&got)));
            }
            pairs += 1;
        }
    }
    let rb = RepBracket::new(&spec, &RepScheme::new(&q, &[2]).unwrap()).unwrap();
    let jac = require(rb.check_jacobi_exhaustive())?;
    Ok(format!("{pairs} coordinate pairs at N = 2, 3; {jac}"))
}

fn trace_morphism() -> Outcome {
    let spec = standard(Quiver::jordan());
    let rb = RepBracket::new(&spec, &RepScheme::new(spec.quiver(), &[2]).unwrap()).unwrap();
    require(check_trace_lie_morphism(&spec, &rb, 100, 0, 4))
}

fn necklace_oracle() -> Outcome {
    all([standard(Quiver::jordan()), standard(Quiver::a3_framed())].iter().map(|s| check_necklace_oracle(s, 100, 0, 4)))
}

fn maurer_cartan() -> Outcome {
    let mut out = Vec::new();
    for base in [Quiver::jordan(), Quiver::a3_framed()] {
        let qb = base.double(0).unwrap();
        let cot = CotangentAlgebra::new(&qb, 0).unwrap();
        let p = cot.standard_bivector().unwrap();
        if !cot.mc_residual(&p).is_zero() {
            return Err("{P, P} is nonzero".into());
        }
        out.push(require(cot.check_associated(&p, &DoubleBracketSpec::standard(&qb).unwrap()))?);
    }
    Ok(format!("{{P, P}} = 0; {}", out.join("; ")))
}

fn extension_theorems() -> Outcome {
    let mut checks = Vec::new();
    for spec in [standard(Quiver::jordan()), standard(Quiver::a3_framed())] {
        let q = spec.quiver().clone();
        for theta in [DoubleDerivation::zero(&q), DoubleDerivation::inner(&q)] {
            let ext = extend_double(&spec, &theta).unwrap();
            checks.push(ext.spec().check_jacobi_generators());
            checks.push(ext.check_t_jacobi());
            checks.push(ext.check_derivation_diagram(&theta, 50, 0, 4));
        }
    }
    all(checks)
}

fn commutative_cube() -> Outcome {
    let a3 = standard(Quiver::a3_framed());
    let jordan = standard(Quiver::jordan());
    let mut checks = Vec::new();
    for (spec, dims) in [(&a3, vec![1, 1, 1, 1]), (&jordan, vec![2])] {
        let q = spec.quiver().clone();
        let theta = DoubleDerivation::zero(&q);
        let cube = Cube::new(spec, &theta, &standard_moment(&q), &dims, 4).unwrap();
        checks.extend(cube.report(100, 0).checks);
    }
    all(checks).map(|_| "six faces and preconditions PASS for A3 at (1,1,1,1) and Jordan at N = 2, 100 samples each".into())
}

fn bar_cobar() -> Outcome {
    let dn = dual_numbers().unwrap();
    let a2 = standard(Quiver::a2());
    let pa2 = preprojective(&a2, 4);
    let mut checks = Vec::new();
    for alg in [&dn as &dyn ncpoisson::barcobar::GradedAlgebra, &pa2] {
        checks.push(check_bar_square(alg, 4).map_err(|e| e.to_string())?);
        checks.push(check_cobar_square(alg, 4).map_err(|e| e.to_string())?);
        checks.push(check_resolution(alg, 4).map_err(|e| e.to_string())?);
    }
    all(checks)
}

fn cyclic_homology() -> Outcome {
    let free = PathAlgebra::new(Quiver::loops(&["x", "y"]));
    let table = connes_homology(&free, 6, 0, 3).map_err(|e| e.to_string())?;
    for weight in 1..=6 {
        for n in 0..=3 {
            let ours = table.dim(weight, n).ok_or(format!("weight {weight}, n {n} indeterminate"))?;
            let oracle = common::free_cyclic_homology(b"xy", n, weight);
            let formula = if n == 0 { common::binary_necklaces(weight) } else { 0 };
            if ours != oracle || ours != formula {
                return Err(format!("weight {weight}, n {n}: computed {ours}, oracle {oracle}, expected {formula}"));
            }
        }
    }
    let a2 = standard(Quiver::a2());
    let table = connes_homology(&preprojective(&a2, 8), 6, 0, 4).map_err(|e| e.to_string())?;
    for weight in 1..=6 {
        for n in 0..=4 {
            let frozen = usize::from(matches!((weight, n), (2, 1) | (4, 3)));
            if table.dim(weight, n) != Some(frozen) {
                return Err(format!("Pi_Q(A2) weight {weight}, n {n}: {:?} differs from fixture {frozen}", table.dim(weight, n)));
            }
        }
    }
    Ok("free K<x,y>: HC_0 = [2,3,4,6,8,14], HC_1..3 = 0, equal to the brute-force oracle; Pi_Q(A2) table matches the fixture".into())
}

fn hc_lie_structure() -> Outcome {
    let jordan = standard(Quiver::jordan());
    let free = PathAlgebra::new(jordan.quiver().clone());
    let hb = HcBracket::new(&free, &jordan, 8).map_err(|e| e.to_string())?;
    let mut details = vec![require(hb.check_against_necklace(4))?];
    let a2 = standard(Quiver::a2());
    let pa2 = preprojective(&a2, 6);
    let hb = HcBracket::new(&pa2, &a2, 6).map_err(|e| e.to_string())?;
    details.push(format!("Pi_Q(A2) {}", require(hb.check_lie(3))?));
    let pj = preprojective(&jordan, 6);
    let hb = HcBracket::new(&pj, &jordan, 6).map_err(|e| e.to_string())?;
    details.push(format!("Pi_Q(Jordan) {}", require(hb.check_lie(3))?));
    details.push(format!("A2 {}", require(pa2.check_projection_lie(&a2, 100, 0))?));
    details.push(format!("Jordan {}", require(pj.check_projection_lie(&jordan, 100, 0))?));
    Ok(details.join("; "))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("standard bracket validity", standard_bracket_validity),
        ("moment map", moment_map),
        ("representation bracket", representation_bracket),
        ("trace morphism", trace_morphism),
        ("necklace oracle equivalence", necklace_oracle),
        ("Maurer-Cartan", maurer_cartan),
        ("extension theorems", extension_theorems),
        ("commutative cube", commutative_cube),
        ("bar/cobar soundness", bar_cobar),
        ("cyclic homology", cyclic_homology),
        ("HC Lie structure", hc_lie_structure),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({ms} ms): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {detail}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
