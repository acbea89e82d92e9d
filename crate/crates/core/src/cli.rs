//! The `wallx` command line: JSON-lines output, machine-readable errors and
//! golden-file comparison.
//!
//! Exit codes: 0 success, 1 verification failure or golden mismatch, 2 usage
//! or input error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::adhm::{self, AdhmPointJson, Side};
use crate::bwb::{self, Classified, OrthogonalityVerdict, SubsetPolicy};
use crate::error::{check_dim, Error, ParseError};
use crate::invariants::{self, TypeS};
use crate::polytope::{self, Zonotope};
use crate::rational::{self, Q};
use crate::sod::{self, GeneratorCounter};
use crate::weight::{multiset_size, Cocharacter, QuiverShape, Weight};

#[derive(Parser, Debug)]
#[command(
    name = "wallx",
    version,
    about = "Exact DT/PT quiver wall-crossing combinatorics"
)]
pub struct Cli {
    /// Worker threads for parallel sweeps
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for sampled sweeps
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Compare output against fixtures in this directory
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    /// Write the fixture instead of comparing (with --golden)
    #[arg(long, global = true)]
    pub bless: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "W")]
    W,
    #[value(name = "Wslice")]
    WSlice,
    #[value(name = "V")]
    V,
    #[value(name = "Wa")]
    Wa,
    #[value(name = "Va")]
    Va,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership test or dominant integral enumeration for a polytope
    Polytope {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
        /// Slice index for Wslice
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        w: i64,
        /// Point to test, comma separated rationals
        #[arg(long, allow_hyphen_values = true)]
        contains: Option<String>,
        /// Enumerate dominant integral chi with chi + shift in the polytope
        #[arg(long)]
        enumerate: bool,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
    },
    /// Level, p and type of a weight
    Decompose {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
    },
    /// Summand labels with v-tuples and generator counts
    Sod {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        closed: bool,
    },
    /// Run the property suites for one (d, a, mu)
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Borel-Weil-Bott terms for a cocharacter
    Bwb {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long)]
        framed: bool,
        #[arg(long)]
        max_terms: Option<usize>,
    },
    /// Extended ADHM data
    Adhm {
        #[command(subcommand)]
        command: AdhmCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum AdhmCommand {
    /// Potential, critical residuals, stability and reducedness of a point
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        m: usize,
    },
}

/// Failure modes of a command.
enum Failure {
    Input { code: String, message: String },
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Error::from(e).into()
    }
}

type Lines = Vec<Value>;

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(std::env::args_os(), &mut lock)
}

/// Runs the CLI on `args` (including the program name), writing JSON lines to `out`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
                emit(out, &error_line("usage", &e.kind().to_string()));
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            emit(out, &error_line("usage", &e.to_string()));
            return 2;
        }
    };
    let mut lines = Lines::new();
    let result = pool.install(|| execute(&cli, &mut lines));
    match result {
        Err(Failure::Input { code, message }) => {
            emit(out, &error_line(&code, &message));
            2
        }
        other => {
            let mut status = if matches!(other, Err(Failure::Verification)) {
                1
            } else {
                0
            };
            let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
            let _ = out.write_all(text.as_bytes());
            if let Some(dir) = &cli.golden {
                match golden(dir, &golden_name(&cli.command), &text, cli.bless) {
                    Ok(line) => {
                        if line["golden"]["status"] == "mismatch" {
                            status = 1;
                        }
                        emit(out, &line);
                    }
                    Err(message) => {
                        emit(out, &error_line("io-error", &message));
                        return 2;
                    }
                }
            }
            status
        }
    }
}

fn emit(out: &mut dyn Write, line: &Value) {
    let _ = writeln!(out, "{line}");
}

fn error_line(code: &str, message: &str) -> Value {
    json!({"error": {"code": code, "message": message}})
}

fn golden_name(command: &Command) -> String {
    let raw = match command {
        Command::Polytope {
            kind,
            d,
            a,
            w,
            contains,
            enumerate,
            shift,
        } => format!(
            "polytope-{kind:?}-d{d}-a{a}-w{w}-{}-{}-{}",
            contains.as_deref().unwrap_or(""),
            enumerate,
            shift.as_deref().unwrap_or("")
        ),
        Command::Decompose { d, a, mu, chi } => format!("decompose-d{d}-a{a}-mu{mu}-chi{chi}"),
        Command::Sod { d, a, mu, closed } => format!("sod-d{d}-a{a}-mu{mu}-{closed}"),
        Command::Verify { d, a, mu } => format!("verify-d{d}-a{a}-mu{mu}"),
        Command::Bwb {
            d,
            a,
            lambda,
            chi,
            framed,
            max_terms,
        } => {
            format!("bwb-d{d}-a{a}-l{lambda}-chi{chi}-{framed}-{max_terms:?}")
        }
        Command::Adhm {
            command: AdhmCommand::Check { file, m },
        } => {
            format!(
                "adhm-{}-m{m}",
                file.file_stem().and_then(|s| s.to_str()).unwrap_or("point")
            )
        }
    };
    let name: String = raw
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{name}.jsonl")
}

fn golden(dir: &Path, name: &str, text: &str, bless: bool) -> Result<Value, String> {
    let path = dir.join(name);
    let shown = path.display().to_string();
    if bless {
        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
        std::fs::write(&path, text).map_err(|e| format!("{shown}: {e}"))?;
        return Ok(json!({"golden": {"file": name, "status": "written"}}));
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{shown}: {e}"))?;
    let status = if expected == text {
        "match"
    } else {
        "mismatch"
    };
    Ok(json!({"golden": {"file": name, "status": status}}))
}

fn execute(cli: &Cli, lines: &mut Lines) -> Result<(), Failure> {
    match &cli.command {
        Command::Polytope {
            kind,
            d,
            a,
            w,
            contains,
            enumerate,
            shift,
        } => polytope_cmd(
            *kind,
            *d,
            *a,
            *w,
            contains.as_deref(),
            *enumerate,
            shift.as_deref(),
            lines,
        ),
        Command::Decompose { d, a, mu, chi } => decompose_cmd(*d, *a, mu, chi, lines),
        Command::Sod { d, a, mu, closed } => sod_cmd(*d, *a, mu, *closed, lines),
        Command::Verify { d, a, mu } => verify_cmd(*d, *a, mu, cli.seed, lines),
        Command::Bwb {
            d,
            a,
            lambda,
            chi,
            framed,
            max_terms,
        } => bwb_cmd(*d, *a, lambda, chi, *framed, *max_terms, lines),
        Command::Adhm {
            command: AdhmCommand::Check { file, m },
        } => adhm_cmd(file, *m, lines),
    }
}

fn parse_weight(text: &str, d: usize) -> Result<Weight, Failure> {
    let w = Weight::new(rational::parse_q_list(text)?);
    check_dim(d, w.d())?;
    Ok(w)
}

fn parse_mu(text: &str) -> Result<Q, Failure> {
    Ok(rational::parse_q(text)?)
}

fn build(kind: Kind, d: usize, a: usize, w: i64) -> Zonotope {
    match kind {
        Kind::W => polytope::build_w(d),
        Kind::WSlice => polytope::build_w_slice(d, w),
        Kind::V => polytope::build_v(d),
        Kind::Wa => polytope::build_wa(d, a),
        Kind::Va => polytope::build_va(d, a),
    }
}

#[allow(clippy::too_many_arguments)]
fn polytope_cmd(
    kind: Kind,
    d: usize,
    a: usize,
    w: i64,
    contains: Option<&str>,
    enumerate: bool,
    shift: Option<&str>,
    lines: &mut Lines,
) -> Result<(), Failure> {
    let p = build(kind, d, a, w);
    let kind_name = kind
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    if let Some(text) = contains {
        let x = parse_weight(text, d)?;
        let cert = polytope::certificate(&p, &x)?;
        lines.push(json!({
            "kind": kind_name, "d": d, "a": a,
            "point": x,
            "member": cert.is_some(),
            "certificate": cert,
        }));
    }
    if enumerate {
        let shift = match shift {
            Some(text) => parse_weight(text, d)?,
            None => Weight::zero(d),
        };
        let found = polytope::enumerate_dominant_integral(&p, &shift)?;
        lines.push(json!({
            "kind": kind_name, "d": d, "a": a, "shift": shift,
            "count": found.len(),
            "weights": found,
        }));
    }
    if contains.is_none() && !enumerate {
        lines.push(json!({"kind": kind_name, "d": d, "a": a, "polytope": p}));
    }
    Ok(())
}

fn type_json(s: &TypeS) -> Value {
    json!({"d_prime": s.d_prime, "parts": s.parts, "v": s.v()})
}

fn decompose_cmd(
    d: usize,
    a: usize,
    mu: &str,
    chi: &str,
    lines: &mut Lines,
) -> Result<(), Failure> {
    let mu = parse_mu(mu)?;
    let chi = parse_weight(chi, d)?;
    let t = invariants::type_of_weight(&chi, a, &mu)?;
    lines.push(json!({
        "chi": chi,
        "e": t.level.e,
        "p": rational::to_wire(&t.p),
        "witness": t.level,
        "type": type_json(&t.ty),
        "components": t.components,
        "residual": t.residual,
    }));
    Ok(())
}

fn sod_cmd(d: usize, a: usize, mu: &str, closed: bool, lines: &mut Lines) -> Result<(), Failure> {
    let mu = parse_mu(mu)?;
    let reports = sod::summand_reports(d, a, &mu, closed)?;
    let total: usize = reports.iter().map(|r| r.generators).sum();
    let n = reports.len();
    for r in reports {
        lines.push(serde_json::to_value(r).expect("serializable"));
    }
    lines.push(json!({"summands": n, "generators": total}));
    Ok(())
}

fn bwb_cmd(
    d: usize,
    a: usize,
    lambda: &str,
    chi: &str,
    framed: bool,
    max_terms: Option<usize>,
    lines: &mut Lines,
) -> Result<(), Failure> {
    let lambda = Cocharacter::new(rational::parse_i64_list(lambda)?);
    check_dim(d, lambda.d())?;
    let chi = parse_weight(chi, d)?;
    let shape = QuiverShape {
        d,
        a,
        framed,
        loops_at_zero: 0,
    };
    let (negative, terms) = bwb::bwb_terms(&chi, &shape, &lambda, max_terms)?;
    lines.push(json!({"negative": negative, "size": multiset_size(&negative)}));
    let vanished = terms.iter().filter(|t| t.vanished).count();
    let n = terms.len();
    for t in terms {
        lines.push(serde_json::to_value(t).expect("serializable"));
    }
    lines.push(json!({"terms": n, "vanished": vanished}));
    Ok(())
}

fn adhm_cmd(file: &Path, m: usize, lines: &mut Lines) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Input {
        code: "io-error".into(),
        message: format!("{}: {e}", file.display()),
    })?;
    let raw: AdhmPointJson = serde_json::from_str(&text)
        .map_err(|e| Failure::from(ParseError::Malformed(e.to_string())))?;
    let p = raw.parse()?;
    let value = adhm::potential(&p, m)?;
    let residuals = adhm::critical_residuals(&p, m)?;
    let mut norms = BTreeMap::new();
    let mut zero = BTreeMap::new();
    for (name, xs) in residuals.blocks() {
        let norm = adhm::max_abs(&xs);
        zero.insert(name, norm.is_zero());
        norms.insert(name, rational::to_wire(&norm));
    }
    let dt = adhm::is_semistable(&p, Side::Dt)?;
    let pt = adhm::is_semistable(&p, Side::Pt)?;
    lines.push(json!({
        "potential": rational::to_wire(&value),
        "residual_norms": norms,
        "residual_zero": zero,
        "critical": residuals.is_critical(),
        "dt_semistable": dt.semistable,
        "dt_invariant_subspace": dt,
        "pt_semistable": pt.semistable,
        "pt_invariant_subspace": pt,
        "reduced": adhm::is_reduced(&p.alpha, m),
    }));
    Ok(())
}

/// Pass/fail tally of one verification suite.
#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    first_failure: Option<Value>,
}

impl Tally {
    fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn line(&self, suite: &str, extra: Value) -> Value {
        let mut v = json!({
            "suite": suite,
            "passed": self.passed,
            "failed": self.failed,
        });
        if let Some(f) = &self.first_failure {
            v["first_failure"] = f.clone();
        }
        if let Value::Object(map) = extra {
            for (k, x) in map {
                v[k] = x;
            }
        }
        v
    }
}

fn verify_cmd(d: usize, a: usize, mu: &str, seed: u64, lines: &mut Lines) -> Result<(), Failure> {
    let mu = parse_mu(mu)?;
    let generic = invariants::is_generic_mu(&mu, d);
    let gens = sod::generators(d, a, &mu)?;
    lines.push(json!({
        "d": d, "a": a, "mu": rational::to_wire(&mu),
        "generic": generic, "generators": gens.len(),
    }));
    let mut failed = false;
    let mut push = |lines: &mut Lines, t: &Tally, suite: &str, extra: Value| {
        failed |= t.failed > 0;
        lines.push(t.line(suite, extra));
    };

    // uniqueness of the level
    let level_counts: Vec<Vec<usize>> = gens
        .par_iter()
        .map(|chi| {
            let x = invariants::shifted(chi, &mu);
            invariants::passing_levels(&x, a).map(|ws| ws.iter().map(|w| w.e).collect())
        })
        .collect::<Result<_, _>>()?;
    let mut t = Tally::default();
    for (chi, levels) in gens.iter().zip(&level_counts) {
        t.record(levels.len() == 1, || json!({"chi": chi, "levels": levels}));
    }
    push(lines, &t, "uniqueness-of-e", json!({}));

    // types, classified once for the remaining suites
    let classified: Vec<Result<Classified, Error>> = gens
        .par_iter()
        .map(|chi| bwb::classify(chi, a, &mu))
        .collect();
    let mut t = Tally::default();
    for (chi, c) in gens.iter().zip(&classified) {
        let ok = match c {
            Ok(c) => invariants::p_of_type(&c.ty) == c.p,
            Err(_) => false,
        };
        t.record(
            ok,
            || json!({"chi": chi, "error": c.as_ref().err().map(|e| e.code())}),
        );
    }
    push(lines, &t, "types", json!({}));
    let classified: Vec<Classified> = classified.into_iter().filter_map(Result::ok).collect();

    // p inequalities
    let mut t = Tally::default();
    let mut zero_p_nonzero_e = 0usize;
    for c in &classified {
        let mut ok = c.p <= Q::from_integer(0.into());
        for l in 0..=d {
            let pl = invariants::p_l(&c.chi, l, a, &mu);
            ok &= if l > c.e { pl > c.p } else { pl >= c.p };
        }
        if c.p == Q::from_integer(0.into()) && c.e != 0 {
            zero_p_nonzero_e += 1;
        }
        t.record(ok, || json!({"chi": c.chi}));
    }
    push(
        lines,
        &t,
        "p-inequalities",
        json!({"zero_p_with_positive_e": zero_p_nonzero_e}),
    );

    // bijection counts, overall and per summand
    let summands = sod::enumerate_summands(d, a, &mu, true)?;
    let mut counter = GeneratorCounter::new();
    let mut by_type: BTreeMap<(usize, Vec<(usize, i64)>), usize> = BTreeMap::new();
    for c in &classified {
        *by_type
            .entry((c.ty.d_prime, c.ty.parts.clone()))
            .or_insert(0) += 1;
    }
    let mut t = Tally::default();
    let mut rhs_total = 0usize;
    for s in &summands {
        let expected = counter.summand(s)?;
        rhs_total += expected;
        let got = by_type.remove(&(s.d_prime, s.parts.clone())).unwrap_or(0);
        t.record(
            got == expected,
            || json!({"type": type_json(s), "weights": got, "product": expected}),
        );
    }
    t.record(
        by_type.is_empty(),
        || json!({"types_outside_summands": by_type.len()}),
    );
    t.record(
        rhs_total == gens.len(),
        || json!({"generators": gens.len(), "summand_total": rhs_total}),
    );
    if generic {
        let strict = sod::enumerate_summands(d, a, &mu, false)?;
        t.record(
            strict == summands,
            || json!({"strict": strict.len(), "closed": summands.len()}),
        );
    }
    push(
        lines,
        &t,
        "bijection-counts",
        json!({"summands": summands.len()}),
    );

    // orthogonality over all ordered pairs
    let policy = SubsetPolicy {
        seed,
        ..SubsetPolicy::default()
    };
    let pairs: Vec<(usize, usize)> = (0..classified.len())
        .flat_map(|i| (0..classified.len()).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<OrthogonalityVerdict> = pairs
        .par_iter()
        .map(|&(i, j)| bwb::orthogonality_check(&classified[i], &classified[j], a, &policy))
        .collect::<Result<_, _>>()?;
    let mut t = Tally::default();
    let (mut applicable, mut subsets, mut sampled) = (0usize, 0usize, 0usize);
    for (&(i, j), v) in pairs.iter().zip(&verdicts) {
        if let OrthogonalityVerdict::Checked {
            checked,
            exhaustive,
            ..
        } = v
        {
            applicable += 1;
            subsets += checked;
            sampled += usize::from(!exhaustive);
            t.record(
                v.passed(),
                || json!({"chi": classified[i].chi, "chi_prime": classified[j].chi, "verdict": v}),
            );
        }
    }
    push(
        lines,
        &t,
        "orthogonality",
        json!({"pairs": pairs.len(), "applicable": applicable, "subsets": subsets, "sampled_pairs": sampled}),
    );

    // BWB term counts and total weight
    let shape = QuiverShape::unframed(d, a);
    let mut t = Tally::default();
    for c in &classified {
        for e in 0..=d {
            let (neg, terms) = bwb::bwb_terms(&c.chi, &shape, &Cocharacter::tau(e, d), None)?;
            let expected: usize = neg.iter().map(|w| w.multiplicity + 1).product();
            let mut ok = terms.len() == expected;
            for term in &terms {
                if let Some(w) = &term.weight {
                    let sigma_j = bwb::sigma_of(&neg, &term.j, d);
                    ok &= w.total() == c.chi.total() - sigma_j.total();
                }
            }
            t.record(ok, || json!({"chi": c.chi, "e": e}));
        }
    }
    push(lines, &t, "bwb-counts", json!({}));

    // windows; for non-generic mu the boundary can be attained, so only the
    // closed window is required there
    let mut t = Tally::default();
    let mut boundary = 0usize;
    for chi in &gens {
        for e in 1..=d {
            let half_open = sod::window_contains(chi, e, a, &mu, true)?;
            let closed = sod::window_contains(chi, e, a, &mu, false)?;
            boundary += usize::from(closed && !half_open);
            let ok = if generic { half_open && closed } else { closed };
            t.record(
                ok,
                || json!({"chi": chi, "e": e, "half_open": half_open, "closed": closed}),
            );
        }
    }
    push(lines, &t, "window", json!({"boundary_hits": boundary}));

    // transforms
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    for _ in 0..1000 {
        let s = random_type(&mut rng, a, &mu);
        let v = s.v();
        let with_v: Vec<(usize, i64)> = s
            .parts
            .iter()
            .zip(&v)
            .map(|(&(di, _), &vi)| (di, vi))
            .collect();
        let back = invariants::transform_v_to_w(&with_v, s.d_prime);
        let w: Vec<i64> = s.parts.iter().map(|&(_, w)| w).collect();
        let shift = (s.d - s.d_prime) as i64 * s.d_prime as i64;
        let (pw, pv) = invariants::p_of_type_both(&s);
        let ok = back == w && v.iter().sum::<i64>() - w.iter().sum::<i64>() == shift && pw == pv;
        t.record(ok, || json!({"type": type_json(&s)}));
    }
    push(lines, &t, "transforms", json!({}));

    lines.push(json!({"verify": {"ok": !failed}}));
    if failed {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

/// A random label with `d <= 8`, used for the transform identities.
pub fn random_type(rng: &mut impl Rng, a: usize, mu: &Q) -> TypeS {
    let d = rng.gen_range(1..=8usize);
    let d_prime = rng.gen_range(0..=d);
    let mut left = d - d_prime;
    let mut parts = Vec::new();
    while left > 0 {
        let di = rng.gen_range(1..=left);
        left -= di;
        parts.push((di, rng.gen_range(-50..=50i64)));
    }
    TypeS {
        d,
        a,
        mu: mu.clone(),
        parts,
        d_prime,
    }
}
