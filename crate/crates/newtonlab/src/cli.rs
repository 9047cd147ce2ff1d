//! Command-line surface: verb dispatch over `key=value` options, with
//! deterministic report output and the exit-code contract
//! 0 = success, 1 = invalid input, 2 = internal assertion or counterexample.

use crate::covers::{
    exactness_class, hodge_lower_bound, parse_branches, rh_genus, BranchDatum,
    CoverError, CoverSpec,
};
use crate::families::{
    construct_theorem4, construct_theorem5, max_admissible_k, oort_witness, FamilyError,
    FamilyMember, FamilySource,
};
use crate::fp::{parse_ratfunc, FpError};
use crate::polygon::{BasicGraph, NewtonPolygon, PolygonError};
use crate::report::{emit_report, emit_single, format_row_kv, ReportFormat, Row};
use crate::strata::{is_unlikely_polygon, moduli_dims, unlikely_family_report, StrataError};
use crate::zeta::{verify_prediction, ZetaError, DEFAULT_FIELD_GUARD};
use std::collections::BTreeMap;
use std::io::Write;

pub const USAGE: &str = "\
newtonlab - Newton polygons of degree-p cyclic covers, with a zeta oracle

usage: newtonlab <verb> [key=value ...] [--format=kv|tsv]

verbs:
  predict      p= gX= ordinary= branches=d:deg,...   Hodge lower bound for a cover spec
  construct    p= g= d= k= [theorem=4]               resolve a family member (theorem=5: p= g= only)
  zeta-verify  p= f= [guard=]                        brute-force check of the prediction for y^p-y=f
  codim        slopes= [g=]                          stratum codimension and unlikely-intersection verdict
  oort         p= d= g= k= g2= k2=                   amalgamation witness for two members
  sweep        p= d= g=a..b k=n|max [report=members|unlikely] [ref=parabola|slopes]
  asymptotics  p= g=a..b                             single-pole family vs the parabola x^2/4

environment:
  NEWTONLAB_FIELD_GUARD   largest extension degree the oracle may enumerate (default 16)

exit codes: 0 success, 1 invalid input, 2 internal assertion or counterexample";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Predict,
    Construct,
    ZetaVerify,
    Codim,
    Oort,
    Sweep,
    Asymptotics,
}

impl Verb {
    fn from_name(name: &str) -> Option<Verb> {
        match name {
            "predict" => Some(Verb::Predict),
            "construct" => Some(Verb::Construct),
            "zeta-verify" => Some(Verb::ZetaVerify),
            "codim" => Some(Verb::Codim),
            "oort" => Some(Verb::Oort),
            "sweep" => Some(Verb::Sweep),
            "asymptotics" => Some(Verb::Asymptotics),
            _ => None,
        }
    }

    fn allowed_keys(&self) -> &'static [&'static str] {
        match self {
            Verb::Predict => &["p", "gX", "ordinary", "branches"],
            Verb::Construct => &["theorem", "p", "d", "g", "k"],
            Verb::ZetaVerify => &["p", "f", "guard"],
            Verb::Codim => &["slopes", "g"],
            Verb::Oort => &["p", "d", "g", "k", "g2", "k2"],
            Verb::Sweep => &["p", "d", "g", "k", "report", "ref"],
            Verb::Asymptotics => &["p", "g"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Command {
    pub verb: Verb,
    pub options: BTreeMap<String, String>,
    pub format: ReportFormat,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    InvalidInput(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::InvalidInput(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::InvalidInput(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::HeightMismatch { .. } => CliError::Internal(e.to_string()),
            other => CliError::InvalidInput(other.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Cover(inner) => inner.into(),
            other => CliError::InvalidInput(other.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::CounterexampleFound(_) | ZetaError::RoundTripFailure { .. } => {
                CliError::Internal(e.to_string())
            }
            ZetaError::Cover(inner) => inner.into(),
            other => CliError::InvalidInput(other.to_string()),
        }
    }
}

impl From<StrataError> for CliError {
    fn from(e: StrataError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<PolygonError> for CliError {
    fn from(e: PolygonError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<FpError> for CliError {
    fn from(e: FpError) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("io error: {e}"))
    }
}

pub fn parse_command(args: &[String]) -> Result<Command, CliError> {
    let verb_name = args
        .first()
        .ok_or_else(|| CliError::Usage(USAGE.to_string()))?;
    let verb = Verb::from_name(verb_name).ok_or_else(|| {
        CliError::Usage(format!("unknown verb {verb_name:?}\n\n{USAGE}"))
    })?;
    let mut options = BTreeMap::new();
    let mut format = ReportFormat::KeyValue;
    for arg in &args[1..] {
        if let Some(fmt) = arg.strip_prefix("--format=") {
            format = match fmt {
                "kv" => ReportFormat::KeyValue,
                "tsv" => ReportFormat::Tsv,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown format {other:?}; expected kv or tsv"
                    )))
                }
            };
            continue;
        }
        let (key, value) = arg.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("expected key=value, got {arg:?}"))
        })?;
        if !verb.allowed_keys().contains(&key) {
            return Err(CliError::Usage(format!(
                "unknown key {key:?} for verb {verb_name}; allowed: {}",
                verb.allowed_keys().join(", ")
            )));
        }
        if options.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Usage(format!("duplicate key {key:?}")));
        }
    }
    Ok(Command {
        verb,
        options,
        format,
    })
}

fn require<'a>(options: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str, CliError> {
    options
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::Usage(format!("missing required key {key}=")))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, CliError> {
    value
        .parse::<u64>()
        .map_err(|_| CliError::InvalidInput(format!("{key}={value:?} is not a nonnegative integer")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    value
        .parse::<bool>()
        .map_err(|_| CliError::InvalidInput(format!("{key}={value:?} is not true/false")))
}

/// `a..b` (inclusive) or a single integer.
fn parse_range(key: &str, value: &str) -> Result<(u64, u64), CliError> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo = parse_u64(key, lo)?;
        let hi = parse_u64(key, hi)?;
        if lo > hi {
            return Err(CliError::InvalidInput(format!(
                "{key}={value:?}: empty range"
            )));
        }
        Ok((lo, hi))
    } else {
        let v = parse_u64(key, value)?;
        Ok((v, v))
    }
}

fn field_guard(options: &BTreeMap<String, String>) -> Result<u32, CliError> {
    if let Some(v) = options.get("guard") {
        let g = v
            .parse::<u32>()
            .map_err(|_| CliError::InvalidInput(format!("guard={v:?} is not a positive integer")))?;
        if g == 0 {
            return Err(CliError::InvalidInput("guard must be >= 1".into()));
        }
        return Ok(g);
    }
    match std::env::var("NEWTONLAB_FIELD_GUARD") {
        Ok(v) => v.parse::<u32>().map_err(|_| {
            CliError::InvalidInput(format!("NEWTONLAB_FIELD_GUARD={v:?} is not an integer"))
        }),
        Err(_) => Ok(DEFAULT_FIELD_GUARD),
    }
}

fn branches_string(branches: &[BranchDatum]) -> String {
    branches
        .iter()
        .map(|b| format!("{}:{}", b.conductor, b.degree))
        .collect::<Vec<_>>()
        .join(",")
}

fn member_row(m: &FamilyMember) -> Row {
    match m.source {
        FamilySource::Theorem4 => vec![
            ("source", "T4".into()),
            ("p", m.p.to_string()),
            ("d", m.d.to_string()),
            ("g", m.g.to_string()),
            ("k", m.k.to_string()),
            ("delta", m.delta.unwrap_or(0).to_string()),
            ("i", m.i.to_string()),
            ("j", m.j.to_string()),
            ("slopes", m.predicted.to_string()),
            ("exact", m.exactness.to_string()),
        ],
        FamilySource::Theorem5 => vec![
            ("source", "T5".into()),
            ("p", m.p.to_string()),
            ("g", m.g.to_string()),
            ("k", m.k.to_string()),
            ("d", m.d.to_string()),
            ("i", m.i.to_string()),
            ("u", m.u.unwrap_or(0).to_string()),
            ("v", m.v.unwrap_or(0).to_string()),
            ("j", m.j.to_string()),
            (
                "case",
                if m.adjusted_conductors {
                    "II-adjusted".into()
                } else {
                    "I".into()
                },
            ),
            ("slopes", m.predicted.to_string()),
            ("exact", m.exactness.to_string()),
        ],
    }
}

const T4_COLUMNS: &[&str] = &[
    "source", "p", "d", "g", "k", "delta", "i", "j", "slopes", "exact",
];

pub fn run<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    match cmd.verb {
        Verb::Predict => run_predict(cmd, out),
        Verb::Construct => run_construct(cmd, out),
        Verb::ZetaVerify => run_zeta_verify(cmd, out),
        Verb::Codim => run_codim(cmd, out),
        Verb::Oort => run_oort(cmd, out),
        Verb::Sweep => run_sweep(cmd, out),
        Verb::Asymptotics => run_asymptotics(cmd, out),
    }
}

fn run_predict<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let p = parse_u64("p", require(&cmd.options, "p")?)?;
    let gx = parse_u64("gX", require(&cmd.options, "gX")?)?;
    let ordinary = parse_bool("ordinary", require(&cmd.options, "ordinary")?)?;
    let branches = parse_branches(require(&cmd.options, "branches")?)?;
    let spec = CoverSpec::new(p, gx, ordinary, branches)?;
    let polygon = hodge_lower_bound(&spec)?;
    let genus = rh_genus(&spec)?;
    let row: Row = vec![
        ("slopes", polygon.to_string()),
        ("exact", exactness_class(&spec).to_string()),
        ("genus", genus.to_string()),
        ("prank", polygon.slope_zero_multiplicity().to_string()),
    ];
    emit_single(out, &row, cmd.format)?;
    Ok(())
}

fn run_construct<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let theorem = cmd.options.get("theorem").map(String::as_str).unwrap_or("4");
    let p = parse_u64("p", require(&cmd.options, "p")?)?;
    let g = parse_u64("g", require(&cmd.options, "g")?)?;
    let member = match theorem {
        "4" => {
            let d = parse_u64("d", require(&cmd.options, "d")?)?;
            let k = parse_u64("k", require(&cmd.options, "k")?)?;
            construct_theorem4(p, d, g, k)?
        }
        "5" => {
            if cmd.options.contains_key("d") || cmd.options.contains_key("k") {
                return Err(CliError::Usage(
                    "theorem=5 derives d and k; pass only p= and g=".into(),
                ));
            }
            construct_theorem5(p, g)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "theorem={other:?} is not one of 4, 5"
            )))
        }
    };
    emit_single(out, &member_row(&member), cmd.format)?;
    Ok(())
}

fn run_zeta_verify<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let p = parse_u64("p", require(&cmd.options, "p")?)?;
    let f = parse_ratfunc(require(&cmd.options, "f")?, p)?;
    let guard = field_guard(&cmd.options)?;
    let report = match verify_prediction(&f, guard) {
        Ok(report) => report,
        Err(ZetaError::CounterexampleFound(report)) => {
            // Emit the full report with the COUNTEREXAMPLE verdict, then
            // fail with exit code 2.
            emit_single(out, &verification_row(&report), cmd.format)?;
            return Err(CliError::Internal(format!(
                "counterexample: {}",
                format_row_kv(&verification_row(&report))
            )));
        }
        Err(other) => return Err(other.into()),
    };
    emit_single(out, &verification_row(&report), cmd.format)?;
    Ok(())
}

fn verification_row(report: &crate::zeta::VerificationReport) -> Row {
    vec![
        ("f", report.reduced.to_string()),
        ("genus", report.genus.to_string()),
        ("branches", branches_string(&report.branches)),
        ("exact", report.exactness.to_string()),
        ("prank", report.measured_prank.to_string()),
        ("predicted", report.predicted.to_string()),
        ("measured", report.measured.to_string()),
        (
            "checked",
            report.l_polynomial.round_trip_checked_to.to_string(),
        ),
        ("verdict", report.verdict.as_str().to_string()),
    ]
}

fn run_codim<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let polygon: NewtonPolygon = require(&cmd.options, "slopes")?
        .parse()
        .map_err(|e: PolygonError| CliError::InvalidInput(e.to_string()))?;
    if let Some(g) = cmd.options.get("g") {
        let g = parse_u64("g", g)?;
        if g != polygon.genus() {
            return Err(CliError::InvalidInput(format!(
                "g={g} does not match the slope list (height {} means g = {})",
                polygon.height(),
                polygon.genus()
            )));
        }
    }
    let report = is_unlikely_polygon(&polygon)?;
    let dims = moduli_dims(polygon.genus())?;
    let row: Row = vec![
        ("omega", report.omega.count.to_string()),
        ("exact", report.omega.exact_codimension.to_string()),
        ("unlikely", report.is_unlikely.to_string()),
        ("marginal", report.marginal.to_string()),
        ("g", dims.g.to_string()),
        ("threshold", dims.dim_torelli.to_string()),
        ("codimT", report.codim_torelli.to_string()),
        ("dimA", report.ambient_dim.to_string()),
    ];
    emit_single(out, &row, cmd.format)?;
    Ok(())
}

fn run_oort<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let p = parse_u64("p", require(&cmd.options, "p")?)?;
    let d = parse_u64("d", require(&cmd.options, "d")?)?;
    let g = parse_u64("g", require(&cmd.options, "g")?)?;
    let k = parse_u64("k", require(&cmd.options, "k")?)?;
    let g2 = parse_u64("g2", require(&cmd.options, "g2")?)?;
    let k2 = parse_u64("k2", require(&cmd.options, "k2")?)?;
    let witness = oort_witness(p, d, (g, k), (g2, k2))?;
    let row: Row = vec![
        ("holds", witness.holds.to_string()),
        ("p", p.to_string()),
        ("d", d.to_string()),
        ("g", g.to_string()),
        ("k", k.to_string()),
        ("g2", g2.to_string()),
        ("k2", k2.to_string()),
        ("combined", witness.combined.predicted.to_string()),
    ];
    emit_single(out, &row, cmd.format)?;
    Ok(())
}

fn resolve_k(spec: &str, p: u64, d: u64, g: u64) -> Result<Option<u64>, CliError> {
    if spec == "max" {
        Ok(max_admissible_k(p, d, g))
    } else {
        let k = parse_u64("k", spec)?;
        match max_admissible_k(p, d, g) {
            Some(kmax) if k <= kmax => Ok(Some(k)),
            _ => Ok(None), // inadmissible at this genus: no member
        }
    }
}

fn run_sweep<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let p = parse_u64("p", require(&cmd.options, "p")?)?;
    let d = parse_u64("d", require(&cmd.options, "d")?)?;
    let (g_lo, g_hi) = parse_range("g", require(&cmd.options, "g")?)?;
    let k_spec = require(&cmd.options, "k")?;
    let report_kind = cmd
        .options
        .get("report")
        .map(String::as_str)
        .unwrap_or("members");

    let mut members = Vec::new();
    for g in g_lo..=g_hi {
        if let Some(k) = resolve_k(k_spec, p, d, g)? {
            members.push(construct_theorem4(p, d, g, k)?);
        }
    }

    match report_kind {
        "members" => {
            let rows: Vec<Row> = members.iter().map(member_row).collect();
            emit_report(out, T4_COLUMNS, &rows, cmd.format)?;
        }
        "unlikely" => {
            let reference = match cmd.options.get("ref").map(String::as_str) {
                None | Some("parabola") => BasicGraph::parabola(),
                Some(slopes) => {
                    let polygon: NewtonPolygon = slopes
                        .parse()
                        .map_err(|e: PolygonError| CliError::InvalidInput(e.to_string()))?;
                    polygon.scaled()?
                }
            };
            let pairs: Vec<(u64, NewtonPolygon)> = members
                .iter()
                .map(|m| (m.g, m.predicted.clone()))
                .collect();
            let family = unlikely_family_report(&pairs, &reference)?;
            let rows: Vec<Row> = family
                .rows
                .iter()
                .map(|r| {
                    vec![
                        ("g", r.g.to_string()),
                        ("omega", r.omega.count.to_string()),
                        ("codimT", r.codim_torelli.to_string()),
                        ("dimA", r.dim_ag.to_string()),
                        ("unlikely", r.is_unlikely.to_string()),
                        ("mingap", r.min_gap.to_string()),
                        ("ratio", r.omega_over_g2.to_string()),
                    ]
                })
                .collect();
            emit_report(
                out,
                &["g", "omega", "codimT", "dimA", "unlikely", "mingap", "ratio"],
                &rows,
                cmd.format,
            )?;
            match family.unlikely_from {
                Some(g0) => writeln!(out, "# g0={g0}")?,
                None => writeln!(out, "# g0=none")?,
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "report={other:?} is not one of members, unlikely"
            )))
        }
    }
    Ok(())
}

fn run_asymptotics<W: Write>(cmd: &Command, out: &mut W) -> Result<(), CliError> {
    let p = parse_u64("p", require(&cmd.options, "p")?)?;
    let (g_lo, g_hi) = parse_range("g", require(&cmd.options, "g")?)?;
    let parabola = BasicGraph::parabola();
    let mut rows: Vec<Row> = Vec::new();
    for g in g_lo..=g_hi {
        let member = match construct_theorem5(p, g) {
            Ok(m) => m,
            Err(FamilyError::GenusTooSmall { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let gap = member.predicted.scaled()?.min_gap(&parabola);
        rows.push(vec![
            ("g", g.to_string()),
            ("i", member.i.to_string()),
            ("u", member.u.unwrap_or(0).to_string()),
            ("v", member.v.unwrap_or(0).to_string()),
            ("k", member.k.to_string()),
            ("d", member.d.to_string()),
            (
                "case",
                if member.adjusted_conductors {
                    "II-adjusted".into()
                } else {
                    "I".into()
                },
            ),
            ("mingap", gap.to_string()),
        ]);
    }
    emit_report(
        out,
        &["g", "i", "u", "v", "k", "d", "case", "mingap"],
        &rows,
        cmd.format,
    )?;
    Ok(())
}

/// Parse and run; errors go to `err` with the documented exit code.
pub fn main_entry<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    if args.first().map(String::as_str) == Some("--help")
        || args.first().map(String::as_str) == Some("help")
    {
        let _ = writeln!(out, "{USAGE}");
        return 0;
    }
    let cmd = match parse_command(args) {
        Ok(cmd) => cmd,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            return e.exit_code();
        }
    };
    match run(&cmd, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (String, Result<(), CliError>) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let cmd = parse_command(&args).unwrap();
        let mut buf = Vec::new();
        let result = run(&cmd, &mut buf);
        (String::from_utf8(buf).unwrap(), result)
    }

    #[test]
    fn predict_matches_canonical_output() {
        let (out, res) = run_to_string(&["predict", "p=3", "gX=0", "ordinary=true", "branches=2:1"]);
        res.unwrap();
        assert_eq!(out, "slopes=1/2,1/2 exact=small-conductors genus=1 prank=0\n");
    }

    #[test]
    fn construct_canonical_member() {
        let (out, res) = run_to_string(&["construct", "p=3", "d=2", "g=12", "k=1"]);
        res.unwrap();
        assert_eq!(
            out,
            "source=T4 p=3 d=2 g=12 k=1 delta=2 i=0 j=4 \
             slopes=0,0,0,0,0,0,0,0,0,0,1/2,1/2,1/2,1/2,1,1,1,1,1,1,1,1,1,1 \
             exact=small-conductors\n"
        );
    }

    #[test]
    fn construct_theorem_five() {
        let (out, res) = run_to_string(&["construct", "theorem=5", "p=3", "g=7"]);
        res.unwrap();
        assert!(out.starts_with("source=T5 p=3 g=7 k=7 d=5 i=0 u=1 v=1 j=0 case=I"));
    }

    #[test]
    fn codim_reports_omega_and_verdict() {
        let slopes = "0,0,0,0,0,0,0,0,1/2,1/2,1/2,1/2,1/2,1/2,1/2,1/2,1,1,1,1,1,1,1,1";
        let (out, res) = run_to_string(&["codim", &format!("slopes={slopes}"), "g=12"]);
        res.unwrap();
        assert!(out.starts_with("omega=6 exact=true unlikely=false"));
    }

    #[test]
    fn codim_rejects_mismatched_genus() {
        let (_, res) = run_to_string(&["codim", "slopes=0,1", "g=5"]);
        assert!(matches!(res, Err(CliError::InvalidInput(_))));
    }

    #[test]
    fn oort_holds() {
        let (out, res) = run_to_string(&["oort", "p=3", "d=2", "g=12", "k=1", "g2=12", "k2=1"]);
        res.unwrap();
        assert!(out.starts_with("holds=true"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let args: Vec<String> = ["predict", "p=3", "bogus=1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert!(matches!(
            parse_command(&args),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn sweep_members_deterministic() {
        let args = ["sweep", "p=3", "d=2", "g=30..40", "k=max"];
        let (a, res) = run_to_string(&args);
        res.unwrap();
        let (b, _) = run_to_string(&args);
        assert_eq!(a, b);
        assert!(a.starts_with("# columns: source p d g k delta i j slopes exact\n"));
        assert_eq!(a.lines().count(), 12);
    }

    #[test]
    fn sweep_unlikely_report_rows() {
        let (out, res) = run_to_string(&[
            "sweep",
            "p=3",
            "d=2",
            "g=100..120",
            "k=max",
            "report=unlikely",
        ]);
        res.unwrap();
        let last = out.lines().last().unwrap();
        assert!(last.starts_with("# g0="));
        let row = out.lines().nth(1).unwrap();
        assert!(row.starts_with("g=100 omega="));
        assert!(row.contains(" mingap="));
    }

    #[test]
    fn asymptotics_rows() {
        let (out, res) = run_to_string(&["asymptotics", "p=3", "g=10..20"]);
        res.unwrap();
        assert_eq!(out.lines().count(), 12); // header + 11 rows
        assert!(out.contains("mingap=-"));
    }

    #[test]
    fn tsv_format() {
        let (out, res) = run_to_string(&["sweep", "p=3", "d=2", "g=12", "k=1", "--format=tsv"]);
        res.unwrap();
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "source\tp\td\tg\tk\tdelta\ti\tj\tslopes\texact"
        );
        assert!(lines.next().unwrap().starts_with("T4\t3\t2\t12\t1\t"));
    }

    #[test]
    fn slope_round_trip_through_reports() {
        let (out, res) = run_to_string(&["construct", "p=3", "d=2", "g=30", "k=4"]);
        res.unwrap();
        let slopes = out
            .split_whitespace()
            .find_map(|t| t.strip_prefix("slopes="))
            .unwrap();
        let parsed: NewtonPolygon = slopes.parse().unwrap();
        assert_eq!(parsed.to_string(), slopes);
    }
}
