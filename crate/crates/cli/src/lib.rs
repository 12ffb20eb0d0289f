//! Command-line front end for the `ncpoisson` verification suites.
//!
//! Every subcommand reads a quiver-spec document, runs one suite and writes a
//! text report to the output stream. `--json PATH` additionally writes the
//! report as JSON. The exit status is 2 for input errors, 1 when any check
//! fails and 0 otherwise.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncpoisson::barcobar::{
    bar_cobar_report, check_connes_square, connes_homology, shifted_report, ExtendedBracket, GradedAlgebra, HcBracket,
    PathAlgebra,
};
use ncpoisson::cotangent::CotangentAlgebra;
use ncpoisson::dbracket::{
    check_loday_identity, check_necklace_lie, check_necklace_oracle, standard_moment, DoubleBracketSpec,
};
use ncpoisson::expr::parse_nc;
use ncpoisson::extension::{
    check_double_poisson_derivation, check_ideal_preservation, check_reduced_extension_lie, derivation_oracle,
    extend_double, DoubleDerivation,
};
use ncpoisson::hamred::Reduction;
use ncpoisson::ncalg::{to_cyclic, NC};
use ncpoisson::quiver::{Quiver, QuiverDoc};
use ncpoisson::rep::{
    check_matrix_formula, check_moment_property, check_trace_lie_morphism, Cube, RepBracket, RepScheme,
};
use ncpoisson::report::{Check, Report};
use ncpoisson::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "ncpoisson", version, about = "Exact verification suites for double Poisson brackets on quivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of samples for sampled checks.
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Antisymmetry, double Jacobi and the moment map of the document's bracket.
    VerifyDpoisson { spec: PathBuf },
    /// Necklace bracket against the Leibniz route, Lie identities, and an optional evaluation.
    Necklace {
        spec: PathBuf,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
    },
    /// Maurer–Cartan check of a bivector in the cotangent algebra (standard bivector by default).
    McCheck { spec: PathBuf, bivector: Option<String> },
    /// Hamiltonian reduction by the moment element: dimensions, rewrite rules, Lie checks.
    Reduce {
        spec: PathBuf,
        #[arg(long, default_value_t = 6)]
        truncate: usize,
    },
    /// Double Poisson extension by a derivation and its descent to the reduction.
    Extend {
        spec: PathBuf,
        #[arg(long, default_value_t = 6)]
        truncate: usize,
        #[arg(long, value_enum, default_value_t = ThetaChoice::Document)]
        theta: ThetaChoice,
    },
    /// Representation scheme checks at a dimension vector.
    Rep {
        spec: PathBuf,
        /// Per-vertex dimensions; a single value applies to every vertex.
        #[arg(long, value_delimiter = ',', required = true)]
        dim: Vec<usize>,
        #[arg(long, value_enum, default_value_t = RepCheck::Jacobi)]
        check: RepCheck,
        #[arg(long, default_value_t = 4)]
        truncate: usize,
        #[arg(long, value_enum, default_value_t = ThetaChoice::Document)]
        theta: ThetaChoice,
    },
    /// Reduced cyclic homology via the Connes complex.
    CyclicHomology {
        spec: PathBuf,
        /// Largest path-length weight.
        #[arg(long, default_value_t = 6)]
        lengths: usize,
        /// Homological degrees `n0..n1`, both inclusive.
        #[arg(long, default_value = "0..3", value_parser = parse_window)]
        window: (usize, usize),
        #[arg(long, value_enum, default_value_t = AlgebraChoice::Path)]
        algebra: AlgebraChoice,
        /// Normal-form bound for the preprojective algebra.
        #[arg(long, default_value_t = 8)]
        truncate: usize,
    },
    /// Lie bracket on reduced HC_0 together with the shifted and extended bracket checks.
    HcBracket {
        spec: PathBuf,
        /// Exact weight window; basis pairs are taken up to half of it.
        #[arg(long, default_value_t = 8)]
        lengths: usize,
        #[arg(long, value_enum, default_value_t = AlgebraChoice::Path)]
        algebra: AlgebraChoice,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepCheck {
    Jacobi,
    Trace,
    Cube,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThetaChoice {
    /// The document's `derivation` table, or zero when absent.
    Document,
    Zero,
    Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraChoice {
    /// The path algebra of the doubled quiver.
    Path,
    /// Its reduction by the moment element.
    Preprojective,
}

fn parse_window(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected n0..n1, got {s}"))?;
    let lo = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty window {s}"));
    }
    Ok((lo, hi))
}

/// A loaded document with its doubled quiver and bracket.
struct Input {
    doc: QuiverDoc,
    qbar: Quiver,
    spec: DoubleBracketSpec,
}

impl Input {
    fn load(path: &Path) -> Result<Input> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let doc = QuiverDoc::from_json(&text)?;
        let qbar = doc.quiver()?.double(doc.bracket_degree())?;
        let spec = DoubleBracketSpec::from_doc(&qbar, &doc)?;
        Ok(Input { doc, qbar, spec })
    }

    fn moment(&self) -> Result<NC> {
        match &self.doc.moment {
            Some(m) => parse_nc(&self.qbar, m),
            None => Ok(standard_moment(&self.qbar)),
        }
    }

    fn theta(&self, choice: ThetaChoice) -> Result<DoubleDerivation> {
        match (choice, &self.doc.derivation) {
            (ThetaChoice::Document, Some(map)) => DoubleDerivation::from_map(&self.qbar, map),
            (ThetaChoice::Document, None) | (ThetaChoice::Zero, _) => Ok(DoubleDerivation::zero(&self.qbar)),
            (ThetaChoice::Inner, _) => Ok(DoubleDerivation::inner(&self.qbar)),
        }
    }

    fn reduction(&self, bound: usize) -> Result<Reduction> {
        Reduction::new(&self.qbar, &self.moment()?, None, bound)
    }
}

/// The outcome of a suite: its report, extra JSON payload and extra text.
struct Outcome {
    report: Report,
    extra: Option<(String, Value)>,
    text: String,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Outcome {
        Outcome { report, extra: None, text: String::new() }
    }
}

/// Parse `argv` (including the program name), run the suite and return the
/// exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = write!(out, "{}{}", outcome.text, outcome.report.render_text());
            if let Some(path) = &cli.json {
                let mut doc: Value = serde_json::from_str(&outcome.report.to_json()).expect("report JSON is valid");
                if let Some((key, value)) = outcome.extra {
                    doc[key] = value;
                }
                let text = serde_json::to_string_pretty(&doc).expect("JSON serialises");
                if let Err(e) = std::fs::write(path, text) {
                    let _ = writeln!(out, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if outcome.report.any_fail() {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let (samples, seed) = (cli.samples, cli.seed);
    match &cli.command {
        Command::VerifyDpoisson { spec } => verify_dpoisson(&Input::load(spec)?, samples, seed).map(Outcome::from),
        Command::Necklace { spec, left, right } => {
            necklace(&Input::load(spec)?, left.as_deref(), right.as_deref(), samples, seed)
        }
        Command::McCheck { spec, bivector } => mc_check(&Input::load(spec)?, bivector.as_deref()).map(Outcome::from),
        Command::Reduce { spec, truncate } => reduce(&Input::load(spec)?, *truncate, samples, seed),
        Command::Extend { spec, truncate, theta } => {
            extend(&Input::load(spec)?, *truncate, *theta, samples, seed).map(Outcome::from)
        }
        Command::Rep { spec, dim, check, truncate, theta } => {
            rep(&Input::load(spec)?, dim, *check, *truncate, *theta, samples, seed).map(Outcome::from)
        }
        Command::CyclicHomology { spec, lengths, window, algebra, truncate } => {
            cyclic_homology(&Input::load(spec)?, *lengths, *window, *algebra, *truncate)
        }
        Command::HcBracket { spec, lengths, algebra } => {
            hc_bracket(&Input::load(spec)?, *lengths, *algebra, samples, seed).map(Outcome::from)
        }
    }
}

fn verify_dpoisson(input: &Input, samples: usize, seed: u64) -> Result<Report> {
    let spec = &input.spec;
    let mut r = Report::new("verify-dpoisson");
    r.param("samples", samples);
    r.param("seed", seed);
    r.push(Check::timed(|| spec.check_antisymmetry()));
    r.push(Check::timed(|| spec.check_jacobi_generators()));
    r.push(Check::timed(|| spec.check_jacobi_samples(samples, seed, 3)));
    if input.doc.moment.is_some() || input.doc.bracket.is_none() {
        let w = input.moment()?;
        r.push(Check::timed(|| spec.check_moment(&w)));
    }
    Ok(r)
}

fn necklace(input: &Input, left: Option<&str>, right: Option<&str>, samples: usize, seed: u64) -> Result<Outcome> {
    let spec = &input.spec;
    let mut r = Report::new("necklace");
    r.param("samples", samples);
    r.param("seed", seed);
    r.push(Check::timed(|| check_necklace_oracle(spec, samples, seed, 4)));
    r.push(Check::timed(|| check_necklace_lie(spec, samples, seed, 3)));
    r.push(Check::timed(|| check_loday_identity(spec, samples, seed, 3)));
    let mut text = String::new();
    let mut extra = None;
    match (left, right) {
        (Some(x), Some(y)) => {
            let cx = to_cyclic(&parse_nc(&input.qbar, x)?);
            let cy = to_cyclic(&parse_nc(&input.qbar, y)?);
            let value = spec.cyclic_bracket(&cx, &cy);
            let rendered = spec.render_cyclic(&value);
            text = format!("{{{x}, {y}}} = {rendered}\n");
            extra = Some(("bracket".to_string(), json!({ "left": x, "right": y, "value": rendered })));
        }
        (None, None) => {}
        _ => return Err(Error::Parse("--left and --right must be given together".into())),
    }
    Ok(Outcome { report: r, extra, text })
}

fn mc_check(input: &Input, bivector: Option<&str>) -> Result<Report> {
    let cot = CotangentAlgebra::new(&input.qbar, input.doc.bracket_degree())?;
    let p = match bivector {
        Some(b) => to_cyclic(&parse_nc(cot.quiver(), b)?),
        None => cot.standard_bivector()?,
    };
    let mut r = Report::new("mc-check");
    r.param("bivector", bivector.unwrap_or("standard"));
    r.push(Check::timed(|| cot.check_mc(&p)));
    let assoc = cot.associated_bracket(&p)?;
    r.push(Check::timed(|| {
        let mut c = assoc.check_jacobi_generators();
        c.name = format!("associated bracket: {}", c.name);
        c
    }));
    if bivector.is_none() {
        r.push(Check::timed(|| cot.check_associated(&p, &input.spec)));
    }
    Ok(r)
}

fn reduce(input: &Input, truncate: usize, samples: usize, seed: u64) -> Result<Outcome> {
    let red = input.reduction(truncate)?;
    let mut r = Report::new("reduce");
    r.param("truncate", truncate);
    r.param("total dimension", red.total_dimension());
    r.push(Check::timed(|| red.check_projection_lie(&input.spec, samples, seed)));
    r.push(Check::timed(|| red.check_reduced_lie(&input.spec, samples, seed)));
    let q = &input.qbar;
    let rows: Vec<Value> = red
        .dimension_table()
        .iter()
        .map(|d| {
            json!({
                "length": d.length,
                "source": q.vertex_name(d.source),
                "target": q.vertex_name(d.target),
                "dim": d.dim,
            })
        })
        .collect();
    let rules = red.render_rules();
    let mut text = String::from("length source target dim\n");
    for d in red.dimension_table() {
        text.push_str(&format!("{:>6} {:>6} {:>6} {:>3}\n", d.length, q.vertex_name(d.source), q.vertex_name(d.target), d.dim));
    }
    text.push_str("rewrite rules\n");
    for rule in &rules {
        text.push_str(&format!("  {rule}\n"));
    }
    Ok(Outcome { report: r, extra: Some(("reduction".into(), json!({ "dimensions": rows, "rules": rules }))), text })
}

fn extend(input: &Input, truncate: usize, theta: ThetaChoice, samples: usize, seed: u64) -> Result<Report> {
    let spec = &input.spec;
    let theta = input.theta(theta)?;
    let ext = extend_double(spec, &theta)?;
    let red = input.reduction(truncate)?;
    let mut r = Report::new("extend");
    r.param("truncate", truncate);
    r.param("samples", samples);
    r.param("seed", seed);
    r.push(Check::timed(|| check_double_poisson_derivation(spec, &theta)));
    r.push(Check::timed(|| derivation_oracle(spec, &theta).unwrap_or_else(|e| Check::fail("derivation oracle", e.to_string(), Vec::new()))));
    r.push(Check::timed(|| ext.spec().check_antisymmetry()));
    r.push(Check::timed(|| ext.spec().check_jacobi_generators()));
    r.push(Check::timed(|| ext.check_t_jacobi()));
    r.push(Check::timed(|| ext.check_derivation_diagram(&theta, samples, seed, 4)));
    r.push(Check::timed(|| check_ideal_preservation(&theta, &red)));
    r.push(Check::timed(|| check_reduced_extension_lie(spec, &theta, &red, samples, seed)));
    Ok(r)
}

fn dims_for(q: &Quiver, dim: &[usize]) -> Result<Vec<usize>> {
    match dim.len() {
        1 => Ok(vec![dim[0]; q.num_vertices()]),
        n if n == q.num_vertices() => Ok(dim.to_vec()),
        n => Err(Error::Parse(format!("--dim has {n} entries for {} vertices", q.num_vertices()))),
    }
}

fn rep(
    input: &Input,
    dim: &[usize],
    check: RepCheck,
    truncate: usize,
    theta: ThetaChoice,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let spec = &input.spec;
    let dims = dims_for(&input.qbar, dim)?;
    let w = input.moment()?;
    if check == RepCheck::Cube {
        let theta = input.theta(theta)?;
        let cube = Cube::new(spec, &theta, &w, &dims, truncate)?;
        let mut r = cube.report(samples, seed);
        r.param("samples", samples);
        r.param("seed", seed);
        return Ok(r);
    }
    let scheme = RepScheme::new(&input.qbar, &dims)?;
    let rb = RepBracket::new(spec, &scheme)?;
    let mut r = Report::new(match check {
        RepCheck::Jacobi => "rep-jacobi",
        _ => "rep-trace",
    });
    r.param("dims", format!("{dims:?}"));
    r.param("samples", samples);
    r.param("seed", seed);
    match check {
        RepCheck::Jacobi => {
            for a in input.qbar.arrows().iter().filter(|a| a.kind == ncpoisson::quiver::ArrowKind::Original) {
                let (id, star) = (input.qbar.arrow_id(&a.name)?, a.partner.expect("doubled quiver"));
                r.push(Check::timed(|| rb.check_dual_pairing(id, star)));
            }
            if scheme.variables().len() <= 8 {
                r.push(Check::timed(|| rb.check_jacobi_exhaustive()));
            }
            r.push(Check::timed(|| rb.check_jacobi_samples(samples, seed)));
        }
        _ => {
            r.push(Check::timed(|| check_trace_lie_morphism(spec, &rb, samples, seed, 4)));
            r.push(Check::timed(|| check_matrix_formula(spec, &rb, samples, seed, 3)));
            r.push(Check::timed(|| check_moment_property(&rb, &w)));
        }
    }
    Ok(r)
}

fn algebra(input: &Input, choice: AlgebraChoice, bound: usize) -> Result<Box<dyn GradedAlgebra>> {
    Ok(match choice {
        AlgebraChoice::Path => Box::new(PathAlgebra::new(input.qbar.clone())),
        AlgebraChoice::Preprojective => Box::new(input.reduction(bound)?),
    })
}

fn cyclic_homology(
    input: &Input,
    lengths: usize,
    window: (usize, usize),
    choice: AlgebraChoice,
    truncate: usize,
) -> Result<Outcome> {
    let alg = algebra(input, choice, truncate.max(lengths))?;
    let table = connes_homology(alg.as_ref(), lengths, window.0, window.1)?;
    let mut r = Report::new("cyclic-homology");
    r.param("lengths", lengths);
    r.param("window", format!("{}..{}", window.0, window.1));
    r.param("algebra", format!("{choice:?}").to_lowercase());
    r.push(Check::timed(|| {
        check_connes_square(alg.as_ref(), lengths, window.1 + 1)
            .unwrap_or_else(|e| Check::indeterminate("Connes differential squares to zero", e.to_string()))
    }));
    let bar = bar_cobar_report(alg.as_ref(), lengths.min(4))?;
    for c in bar.checks {
        r.push(c);
    }
    let extra = serde_json::to_value(&table).expect("table serialises");
    Ok(Outcome { report: r, extra: Some(("homology".into(), extra)), text: table.render_text() })
}

fn hc_bracket(input: &Input, lengths: usize, choice: AlgebraChoice, samples: usize, seed: u64) -> Result<Report> {
    let spec = &input.spec;
    let alg = algebra(input, choice, lengths)?;
    let hb = HcBracket::new(alg.as_ref(), spec, lengths)?;
    let max_each = (lengths / 2).max(1);
    let mut r = Report::new("hc-bracket");
    r.param("lengths", lengths);
    r.param("algebra", format!("{choice:?}").to_lowercase());
    r.param("HC_0 dimensions", format!("{:?}", (1..=lengths).map(|l| hb.hc0().basis(l).len()).collect::<Vec<_>>()));
    if choice == AlgebraChoice::Path {
        r.push(Check::timed(|| hb.check_against_necklace(max_each)));
    }
    r.push(Check::timed(|| hb.check_lie(max_each)));
    r.push(Check::timed(|| hb.check_representatives(max_each)));
    if choice == AlgebraChoice::Preprojective {
        let red = input.reduction(lengths)?;
        r.push(Check::timed(|| red.check_projection_lie(spec, samples, seed)));
    }
    for c in shifted_report(spec, 1, samples, seed).checks {
        r.push(c);
    }
    if input.qbar.num_vertices() == 1 {
        let eb = ExtendedBracket::new(spec)?;
        r.push(Check::timed(|| eb.check_b_compatibility(samples, seed, false)));
        r.push(Check::timed(|| eb.check_cobar_compatibility(samples, seed, false)));
    }
    Ok(r)
}
