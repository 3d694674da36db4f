//! The `gtsys` command line: argument parsing, one report per command, and
//! rendering as JSON, markdown or CSV.
//!
//! Exit codes: 0 when every check passes or is a finding, 1 for invalid
//! input, 2 for an internal consistency failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::actions::{generalized_classical, invariant_monomials, normalize_action, Action};
use crate::arrangements::{
    build_arrangement, ceva_configuration, certificate_product_membership, freeness_diagnostic, freeness_json,
    random_forms, singular_census, ArrangementKind,
};
use crate::arith::{binomial, is_prime};
use crate::circulant::{
    circulant_det_oracle, circulant_det_symbolic, general_coefficient, CirculantSpec,
};
use crate::classification::{
    arithmetic_counts, class_count_formulas, classify_moves, oracle_partition, orbit, ClassCounts,
};
use crate::error::{Error, Result};
use crate::json::bigint;
use crate::surface::{
    betti_checks, betti_table, determinantal_generators, exponent_polytope_degree, polytope_smoothness,
    printed_betti_table,
};
use crate::wlp::{
    cofactor_in_kernel, conjecture_scan, general_l_samples, gt_verdict, kernel_certificate, minimality_circulant,
    minimality_subset_oracle, ScanEntry, ScanStatus, DIRECT_RANK_MAX_D, SUBSET_ORACLE_MAX_MU,
};

pub const DEFAULT_SEED: u64 = 20240917;

/// Largest d for which `classify` also runs the permutation oracle.
const ORACLE_MAX_D: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), status, detail: detail.into() }
    }

    /// Pass when `ok`, otherwise `else_status`.
    fn cond(name: &str, ok: bool, else_status: Status, detail: impl Into<String>) -> Self {
        Self::new(name, if ok { Status::Pass } else { else_status }, detail)
    }
}

/// A table for the markdown and CSV renderings; JSON carries the same data
/// in `results`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(title: &str, headers: &[&str]) -> Self {
        Self { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: vec![] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs,
            results: json!({}),
            checks: vec![],
            tables: vec![],
        }
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_failure() {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArrangementType {
    Hd,
    Fermat,
    Ceva,
}

#[derive(Parser, Debug)]
#[command(name = "gtsys", version, about = "Cyclic-invariant monomial Togliatti systems, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the rendered report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(clap::Args, Debug, Clone)]
struct ActionArgs {
    #[arg(long)]
    d: usize,
    /// Weights a,b,c of diag(ζ^a, ζ^b, ζ^c).
    #[arg(long, allow_hyphen_values = true)]
    action: Option<String>,
    /// Shorthand for the action (0,1,a).
    #[arg(long)]
    a: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariant monomials of degree d.
    Invariants(ActionArgs),
    /// Togliatti / GT verdict and the kernel certificate.
    GtVerdict {
        #[command(flatten)]
        act: ActionArgs,
        /// Number of seeded random linear forms to test beside x+y+z.
        #[arg(long, default_value_t = 0)]
        general_l: usize,
    },
    /// Minimality by circulant support and by subset removal.
    Minimal(ActionArgs),
    /// Equivalence classes of the M_a family and their counts.
    Classify(ActionArgs),
    /// Circulant determinants and their coefficients.
    Circulant {
        #[arg(long)]
        d: usize,
        /// Index multiset i_1,…,i_d of a general-circulant coefficient.
        #[arg(long)]
        coeff: Option<String>,
        /// Ternary circulant with y at position a and z at position b, as 0,a,b.
        #[arg(long, allow_hyphen_values = true)]
        action: Option<String>,
    },
    /// Minimality of every (0,a,b) over a range of d.
    ConjectureScan {
        #[arg(long, default_value_t = 3)]
        dmin: usize,
        #[arg(long)]
        dmax: usize,
        /// One JSON object per line as results arrive.
        #[arg(long)]
        stream: bool,
    },
    /// Toric surface of the generalized classical system.
    Surface {
        #[arg(long)]
        d: u32,
    },
    /// Line arrangement census and freeness test.
    Arrangement {
        #[arg(long = "type", value_enum)]
        kind: ArrangementType,
        #[arg(long)]
        d: usize,
    },
    /// All analyses for one (d, action).
    Report(ActionArgs),
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("not an integer list: {s:?}"))))
        .collect()
}

fn parse_triple(s: &str) -> Result<[i64; 3]> {
    let v = parse_list(s)?;
    <[i64; 3]>::try_from(v.as_slice()).map_err(|_| Error::InvalidInput(format!("expected three weights, got {s:?}")))
}

impl ActionArgs {
    fn weights(&self) -> Result<[i64; 3]> {
        match (&self.action, self.a) {
            (Some(s), None) => parse_triple(s),
            (None, Some(a)) => Ok([0, 1, a as i64]),
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either --action or --a, not both".into())),
            (None, None) => Err(Error::InvalidInput("an action is required (--action a,b,c or --a)".into())),
        }
    }

    fn action(&self) -> Result<Action> {
        Action::new(self.d, self.weights()?)
    }

    fn inputs(&self) -> Value {
        json!({"d": self.d, "action": self.weights().ok()})
    }
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

fn tuple(v: &[usize]) -> String {
    format!("({})", v.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

fn invariants_report(args: &ActionArgs) -> Result<Report> {
    let action = args.action()?;
    let gt = invariant_monomials(&action);
    let mut r = Report::new("invariants", args.inputs());
    r.results = gt.to_json();
    let mut t = Table::new("generators", &["monomial", "x", "y", "z"]);
    for m in gt.generators() {
        t.push(vec![m.to_string(), m.0[0].to_string(), m.0[1].to_string(), m.0[2].to_string()]);
    }
    r.tables.push(t);
    r.checks.push(Check::cond("artinian", gt.ideal.is_artinian(), Status::Fail, "x^d, y^d, z^d are invariant"));
    let d = action.d();
    if let [0, 1, a] = action.weights() {
        if is_prime(d as u64) && d >= 5 && a >= 2 {
            let expected = 3 + (d - 1) / 2;
            r.checks.push(Check::cond(
                "mu_prime_formula",
                gt.mu() == expected,
                Status::Fail,
                format!("mu = {}, 3 + (d-1)/2 = {expected}", gt.mu()),
            ));
        }
    }
    Ok(r)
}

fn verdict_results(action: &Action, general_l: usize, seed: u64, r: &mut Report) -> Result<Value> {
    let v = gt_verdict(action)?;
    if let Some(direct) = v.rank_direct {
        r.checks.push(Check::cond(
            "rank_routes_agree",
            direct == v.rank,
            Status::Fail,
            format!("restriction rank {} vs direct rank {direct}", v.rank),
        ));
    }
    let sorted = normalize_action(action.d(), 0, action.weights()[1] as i64, action.weights()[2] as i64)?;
    let certificate = match kernel_certificate(&sorted) {
        Ok(c) => {
            if v.d <= DIRECT_RANK_MAX_D {
                let ideal = invariant_monomials(&sorted).ideal;
                r.checks.push(Check::cond(
                    "certificate_in_kernel",
                    cofactor_in_kernel(&ideal, &c.cofactor),
                    Status::Fail,
                    "(x+y+z) * C_{d-1} = F with F in I",
                ));
            }
            let mut j = c.to_json();
            j["weights"] = json!(sorted.weights());
            j
        }
        Err(Error::Unsupported(msg)) => json!({"unavailable": msg}),
        Err(e) => return Err(e),
    };
    let samples = if general_l > 0 {
        let ideal = invariant_monomials(action).ideal;
        serde_json::to_value(general_l_samples(&ideal, seed, general_l)?).expect("samples")
    } else {
        json!([])
    };
    let mut t = Table::new("verdict", &["field", "value"]);
    for (k, val) in serde_json::to_value(&v).expect("verdict").as_object().expect("object") {
        t.push(vec![k.clone(), val.to_string()]);
    }
    r.tables.push(t);
    Ok(json!({"verdict": v, "certificate": certificate, "general_l": samples}))
}

fn verdict_report(args: &ActionArgs, general_l: usize, seed: u64) -> Result<Report> {
    let action = args.action()?;
    let mut r = Report::new("gt-verdict", json!({"d": args.d, "action": args.weights()?, "general_l": general_l, "seed": seed}));
    r.results = verdict_results(&action, general_l, seed, &mut r)?;
    Ok(r)
}

fn minimality_results(action: &Action, r: &mut Report) -> Result<Value> {
    let [w0, w1, w2] = action.weights().map(|w| w as i64);
    let sorted = normalize_action(action.d(), w0, w1, w2)?;
    let ideal = invariant_monomials(&sorted).ideal;
    let circ = minimality_circulant(&sorted)?;
    let subset = if ideal.mu() <= SUBSET_ORACLE_MAX_MU { Some(minimality_subset_oracle(&ideal)?) } else { None };
    if let Some(s) = &subset {
        r.checks.push(Check::cond(
            "minimality_methods_agree",
            s.minimal == circ.minimal,
            Status::Finding,
            format!("circulant: {}, subset removal: {}", circ.minimal, s.minimal),
        ));
    }
    let mut t = Table::new("minimality", &["method", "minimal", "witnesses"]);
    t.push(vec!["circulant support".into(), circ.minimal.to_string(), strings(&circ.missing).join(" ")]);
    if let Some(s) = &subset {
        t.push(vec!["subset removal".into(), s.minimal.to_string(), strings(&s.removable).join(" ")]);
    }
    r.tables.push(t);
    Ok(json!({
        "weights": sorted.weights(),
        "mu": ideal.mu(),
        "circulant": circ,
        "subset": subset,
    }))
}

fn minimal_report(args: &ActionArgs) -> Result<Report> {
    let action = args.action()?;
    let mut r = Report::new("minimal", args.inputs());
    r.results = minimality_results(&action, &mut r)?;
    Ok(r)
}

/// The `a` of an action that is exactly (0,1,a).
fn m_a_parameter(args: &ActionArgs) -> Result<Option<usize>> {
    if args.action.is_none() && args.a.is_none() {
        return Ok(None);
    }
    let action = args.action()?;
    match action.weights() {
        [0, 1, a] => Action::m_a(args.d, a).map(|_| Some(a)),
        w => Err(Error::InvalidInput(format!("classification is for actions (0,1,a), got {w:?}"))),
    }
}

fn classify_report(args: &ActionArgs) -> Result<Report> {
    let d = args.d;
    let a = m_a_parameter(args)?;
    let mut r = Report::new("classify", args.inputs());
    let partition = classify_moves(d)?;
    let counts = ClassCounts::from_partition(&partition);
    r.checks.push(Check::cond(
        "class_sizes_sum",
        counts.weighted_size() == d as i64 - 2,
        Status::Fail,
        format!("2N2+3N3+4N4+6N6 = {} for d-2 = {}", counts.weighted_size(), d - 2),
    ));
    if d <= ORACLE_MAX_D {
        let oracle = oracle_partition(d)?;
        r.checks.push(Check::cond(
            "moves_match_ideal_oracle",
            oracle == partition.member_sets(),
            Status::Fail,
            "closure under a -> d-a+1 and a -> a^-1 vs equality of ideals up to permutation",
        ));
    }
    let comparison = if d >= 5 {
        let c = class_count_formulas(d)?;
        for name in c.mismatches() {
            r.checks.push(Check::new(
                &format!("formula_{name}"),
                Status::Finding,
                "closed form disagrees with the partition count",
            ));
        }
        Some(c.to_json())
    } else {
        None
    };
    let arith = arithmetic_counts(d)?;
    for (name, c) in [("sqrt1", arith.sqrt1), ("phi6", arith.phi6), ("euler_phi", arith.euler_phi)] {
        if !c.matches() {
            r.checks.push(Check::new(
                &format!("count_{name}"),
                Status::Finding,
                format!("formula {} vs brute force {}", c.formula, c.brute),
            ));
        }
    }
    let mut t = Table::new("classes", &["type", "size", "members"]);
    for c in &partition.classes {
        let kind = serde_json::to_value(c.kind).expect("kind");
        t.push(vec![kind.as_str().unwrap_or_default().to_string(), c.size.to_string(), tuple(&c.members)]);
    }
    r.tables.push(t);
    let selected = match a {
        Some(a) => json!({"a": a, "orbit": orbit(d, a)?, "class": partition.class_of(a).map(|i| &partition.classes[i])}),
        None => Value::Null,
    };
    r.results = json!({
        "d": d,
        "classes": partition.classes,
        "counts": comparison.unwrap_or_else(|| json!({"oracle": counts})),
        "arithmetic": arith,
        "selected": selected,
    });
    Ok(r)
}

fn circulant_report(d: usize, coeff: Option<&str>, action: Option<&str>) -> Result<Report> {
    let mut r = Report::new("circulant", json!({"d": d, "coeff": coeff, "action": action}));
    match (coeff, action) {
        (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --coeff or --action".into())),
        (Some(s), None) => {
            let idx: Vec<usize> = parse_list(s)?
                .into_iter()
                .map(|i| usize::try_from(i).map_err(|_| Error::InvalidInput(format!("negative index {i}"))))
                .collect::<Result<_>>()?;
            let value = general_coefficient(d, &idx)?;
            let sum: usize = idx.iter().sum();
            if sum % d != 0 {
                r.checks.push(Check::cond(
                    "vanishes_off_zero_sum",
                    value == 0.into(),
                    Status::Fail,
                    format!("index sum {sum} is not 0 mod {d}"),
                ));
            }
            if d <= 6 {
                let det = circulant_det_oracle(CirculantSpec::General { d })?;
                let e = crate::circulant::index_exponent(d, &idx)?;
                let oracle = det.coeff(&e).cloned().unwrap_or_default();
                r.checks.push(Check::cond("laplace_agrees", oracle == value, Status::Fail, format!("Laplace gives {oracle}")));
            }
            let mut t = Table::new("coefficient", &["indices", "index_sum_mod_d", "value"]);
            t.push(vec![tuple(&idx), (sum % d).to_string(), value.to_string()]);
            r.tables.push(t);
            r.results = json!({"indices": idx, "index_sum_mod_d": sum % d, "coefficient": bigint(&value)});
        }
        (None, spec_src) => {
            let spec = match spec_src {
                None => CirculantSpec::General { d },
                Some(s) => match parse_triple(s)? {
                    [0, a, b] if a > 0 && b > 0 => CirculantSpec::Ternary { d, a: a as usize, b: b as usize },
                    w => return Err(Error::InvalidInput(format!("ternary circulant needs 0,a,b with a,b > 0, got {w:?}"))),
                },
            };
            let det = circulant_det_symbolic(spec)?;
            let names: Vec<String> = match spec {
                CirculantSpec::General { d } => (0..d).map(|i| format!("v{i}")).collect(),
                CirculantSpec::Ternary { .. } => vec!["x".into(), "y".into(), "z".into()],
            };
            let vars: Vec<&str> = names.iter().map(String::as_str).collect();
            if d <= 6 {
                r.checks.push(Check::cond(
                    "laplace_agrees",
                    circulant_det_oracle(spec)? == det,
                    Status::Fail,
                    "eigenvalue product vs cofactor expansion",
                ));
            }
            if let CirculantSpec::Ternary { a, b, .. } = spec {
                let act = Action::new(d, [0, a as i64, b as i64]);
                if let Ok(act) = act {
                    let ideal = invariant_monomials(&act).ideal;
                    let inside = det.terms().all(|(e, _)| ideal.contains(&crate::actions::Monomial([e[0], e[1], e[2]])));
                    r.checks.push(Check::cond("support_invariant", inside, Status::Fail, "every term is invariant"));
                }
            }
            let mut t = Table::new("terms", &["monomial", "coefficient"]);
            for (e, c) in det.terms() {
                t.push(vec![crate::polymat::monomial_string(e, &vars), c.to_string()]);
            }
            r.tables.push(t);
            r.results = json!({
                "determinant": det.display_with(&vars),
                "terms": det.len(),
                "polynomial": det.to_json(),
            });
        }
    }
    Ok(r)
}

fn scan_summary(entries: &[ScanEntry], dmin: usize, dmax: usize, r: &mut Report) {
    let count = |s: ScanStatus| entries.iter().filter(|e| e.status == s).count();
    let findings: Vec<&ScanEntry> = entries.iter().filter(|e| e.is_finding()).collect();
    r.checks.push(Check::cond(
        "no_counterexample",
        findings.is_empty(),
        Status::Finding,
        format!("{} findings among {} actions", findings.len(), entries.len()),
    ));
    let mut t = Table::new("findings", &["d", "a", "b", "mu", "status"]);
    for e in &findings {
        let s = serde_json::to_value(e.status).expect("status");
        t.push(vec![e.d.to_string(), e.a.to_string(), e.b.to_string(), e.mu.to_string(), s.as_str().unwrap_or_default().into()]);
    }
    r.tables.push(t);
    r.results = json!({
        "range": [dmin, dmax],
        "actions": entries.len(),
        "minimal": count(ScanStatus::Minimal),
        "excluded_repeated_weight": count(ScanStatus::ExcludedRepeatedWeight),
        "findings": findings,
    });
}

fn surface_report(d: u32) -> Result<Report> {
    let ideal = generalized_classical(d)?;
    let mut r = Report::new("surface", json!({"d": d}));
    let model = exponent_polytope_degree(&ideal)?;
    r.checks.push(Check::cond(
        "degree_equals_d",
        model.surface_degree == d as i64,
        Status::Fail,
        format!("area {} / index {}", model.normalized_area, model.lattice_index),
    ));
    let smooth = polytope_smoothness(&ideal)?;
    let det = determinantal_generators(d)?;
    r.checks.push(Check::cond("pullback_zero", det.all_pull_back_to_zero(), Status::Fail, "every equation vanishes on the parametrization"));
    r.checks.push(Check::cond(
        "generator_count",
        det.generators.len() == det.expected_count(),
        Status::Fail,
        format!("{} equations, expected {}", det.generators.len(), det.expected_count()),
    ));
    let max_t = if d <= 8 { 4 } else { 3 };
    let betti = betti_table(d)?;
    let checks = betti_checks(&betti, max_t);
    r.checks.push(Check::cond(
        "betti_consistent",
        checks.pass(d),
        Status::Fail,
        format!("alternating sum {}, h(1) = {:?}", checks.alternating_sum, checks.h_at_1),
    ));
    let printed = printed_betti_table(d)?;
    let printed_checks = betti_checks(&printed, max_t);
    if printed != betti {
        r.checks.push(Check::cond(
            "printed_betti_table",
            printed_checks.pass(d),
            Status::Finding,
            "closed form for the even tail fails the alternating-sum and h(1) tests",
        ));
    }
    let mut t = Table::new("betti", &["i", "j", "beta"]);
    for (&(i, j), &b) in &betti.entries {
        t.push(vec![i.to_string(), j.to_string(), b.to_string()]);
    }
    r.tables.push(t);
    r.results = json!({
        "d": d,
        "k": betti.k,
        "generators": strings(ideal.generators()),
        "degree": model.surface_degree,
        "lattice": model,
        "smooth": smooth.smooth,
        "smoothness": smooth,
        "equations": det.display(),
        "betti": betti.rows(),
        "betti_checks": checks,
        "printed_betti": printed.rows(),
        "printed_betti_checks": printed_checks,
    });
    Ok(r)
}

fn arrangement_report(kind: ArrangementType, d: usize, seed: u64) -> Result<Report> {
    let name = match kind {
        ArrangementType::Hd => "hd",
        ArrangementType::Fermat => "fermat",
        ArrangementType::Ceva => "ceva",
    };
    let mut r = Report::new("arrangement", json!({"type": name, "d": d, "seed": seed}));
    if kind == ArrangementType::Ceva {
        let conf = ceva_configuration(d)?;
        r.checks.push(Check::new("incidence", Status::Pass, conf.symbol.clone()));
        let mut runs = Vec::new();
        let mut t = Table::new("certificate products", &["a", "L", "terms", "member"]);
        for a in 2..d {
            for l in std::iter::once([1, 1, 1]).chain(random_forms(seed ^ (d * 1000 + a) as u64, 5)) {
                let m = certificate_product_membership(d, a, l)?;
                r.checks.push(Check::cond(
                    &format!("membership_a{a}_{}_{}_{}", l[0], l[1], l[2]),
                    m.member,
                    Status::Fail,
                    format!("{} terms", m.terms),
                ));
                t.push(vec![a.to_string(), format!("{l:?}"), m.terms.to_string(), m.member.to_string()]);
                runs.push(m);
            }
        }
        r.tables.push(t);
        r.results = json!({"configuration": conf, "certificate_products": runs});
        return Ok(r);
    }
    let ak = if kind == ArrangementType::Hd { ArrangementKind::Hd } else { ArrangementKind::Fermat };
    let lines = build_arrangement(ak, d)?;
    let census = singular_census(&lines)?;
    if ak == ArrangementKind::Fermat {
        let dd = d as u64;
        let derived = binomial(3 * dd - 1, 2) as i64 - (dd * dd) as i64 - 3 * binomial(dd - 1, 2) as i64;
        r.checks.push(Check::cond(
            "fermat_c2",
            census.c2() == derived,
            Status::Fail,
            format!("c2 = {} vs C(3d-1,2) - d^2 - 3C(d-1,2) = {derived}", census.c2()),
        ));
    }
    let mut t = Table::new("census", &["mult", "count"]);
    for (h, b) in &census.counts {
        t.push(vec![h.to_string(), b.to_string()]);
    }
    r.tables.push(t);
    r.results = json!({
        "lines": census.lines,
        "census": census.rows(),
        "c1": census.c1,
        "c2": census.c2(),
        "exponents": freeness_json(&census),
        "necessary_condition_holds": freeness_diagnostic(&census).is_some(),
    });
    Ok(r)
}

fn full_report(args: &ActionArgs, seed: u64) -> Result<Report> {
    let action = args.action()?;
    let mut r = Report::new("report", json!({"d": args.d, "action": args.weights()?, "seed": seed}));
    let gt = invariant_monomials(&action);
    let verdict = verdict_results(&action, 3, seed, &mut r)?;
    let minimality = if action.has_distinct_weights() { minimality_results(&action, &mut r)? } else { Value::Null };
    let class = match action.weights() {
        [0, 1, a] if a >= 2 && args.d >= 5 => {
            let p = classify_moves(args.d)?;
            p.class_of(a).map(|i| json!(p.classes[i])).unwrap_or(Value::Null)
        }
        _ => Value::Null,
    };
    let geometry = match exponent_polytope_degree(&gt.ideal) {
        Ok(m) => json!({"degree": m.surface_degree, "lattice": m, "smoothness": polytope_smoothness(&gt.ideal).ok()}),
        Err(Error::Degenerate(msg)) => json!({"degenerate": msg}),
        Err(e) => return Err(e),
    };
    let mut t = Table::new("generators", &["monomial"]);
    for m in gt.generators() {
        t.push(vec![m.to_string()]);
    }
    r.tables.insert(0, t);
    r.results = json!({
        "invariants": gt.to_json(),
        "gt_verdict": verdict,
        "minimality": minimality,
        "class": class,
        "surface": geometry,
    });
    Ok(r)
}

fn csv_table(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(&t.headers).expect("in-memory write");
    for row in &t.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", headers.join(" | "), "---|".repeat(headers.len()));
    for row in rows {
        s += &format!("| {} |\n", row.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "));
    }
    s
}

/// Renders a report; the output is a pure function of the report.
pub fn render(report: &Report, format: Format) -> String {
    let checks = Table {
        title: "checks".into(),
        headers: vec!["name".into(), "status".into(), "detail".into()],
        rows: report
            .checks
            .iter()
            .map(|c| {
                let s = serde_json::to_value(c.status).expect("status");
                vec![c.name.clone(), s.as_str().unwrap_or_default().to_string(), c.detail.clone()]
            })
            .collect(),
    };
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Md => {
            let mut s = format!("# gtsys {}\n\nversion {}\n\n## Inputs\n\n", report.command, report.tool_version);
            if let Some(obj) = report.inputs.as_object() {
                for (k, v) in obj {
                    s += &format!("- {k}: {v}\n");
                }
            }
            for t in &report.tables {
                s += &format!("\n## {}\n\n{}", t.title, md_table(&t.headers, &t.rows));
            }
            if report.tables.is_empty() {
                s += &format!("\n## Results\n\n```json\n{}\n```\n", serde_json::to_string_pretty(&report.results).expect("json"));
            }
            s += &format!("\n## Checks\n\n{}", md_table(&checks.headers, &checks.rows));
            s
        }
        Format::Csv => report.tables.iter().chain(std::iter::once(&checks)).map(csv_table).collect::<Vec<_>>().join("\n"),
    }
}

fn exit_for(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}

fn emit(text: &str, path: &Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match path {
        Some(p) => match fs::write(p, text) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
                1
            }
        },
        None => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(_) => 1,
        },
    }
}

/// Streams one scan entry per line, then the summary report on its own line.
fn stream_scan(dmin: usize, dmax: usize, sink: &mut dyn Write) -> Result<Report> {
    let mut all = Vec::new();
    for d in dmin.max(3)..=dmax {
        for e in conjecture_scan(d, d)? {
            let _ = writeln!(sink, "{}", serde_json::to_string(&e).expect("entry"));
            all.push(e);
        }
    }
    let mut r = Report::new("conjecture-scan", json!({"dmin": dmin, "dmax": dmax, "stream": true}));
    scan_summary(&all, dmin, dmax, &mut r);
    Ok(r)
}

enum Outcome {
    Report(Report),
    Streamed(i32),
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    Ok(Outcome::Report(match &cli.command {
        Command::Invariants(a) => invariants_report(a)?,
        Command::GtVerdict { act, general_l } => verdict_report(act, *general_l, cli.seed)?,
        Command::Minimal(a) => minimal_report(a)?,
        Command::Classify(a) => classify_report(a)?,
        Command::Circulant { d, coeff, action } => circulant_report(*d, coeff.as_deref(), action.as_deref())?,
        Command::ConjectureScan { dmin, dmax, stream } => {
            if *dmax < *dmin {
                return Err(Error::InvalidInput(format!("dmax {dmax} is below dmin {dmin}")));
            }
            if *stream {
                let mut file;
                let sink: &mut dyn Write = match &cli.out {
                    Some(p) => {
                        file = fs::File::create(p)
                            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display())))?;
                        &mut file
                    }
                    None => out,
                };
                let r = stream_scan(*dmin, *dmax, sink)?;
                let _ = writeln!(sink, "{}", serde_json::to_string(&r).expect("report"));
                return Ok(Outcome::Streamed(r.exit_code()));
            }
            let entries = conjecture_scan(*dmin, *dmax)?;
            let mut r = Report::new("conjecture-scan", json!({"dmin": dmin, "dmax": dmax, "stream": false}));
            scan_summary(&entries, *dmin, *dmax, &mut r);
            r
        }
        Command::Surface { d } => surface_report(*d)?,
        Command::Arrangement { kind, d } => arrangement_report(*kind, *d, cli.seed)?,
        Command::Report(a) => full_report(a, cli.seed)?,
    }))
}

/// Runs one command line (including the program name) and returns the exit
/// code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(Outcome::Report(report)) => {
            let code = emit(&render(&report, cli.format), &cli.out, out, err);
            if code != 0 {
                return code;
            }
            for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
                let _ = writeln!(err, "check failed: {} ({})", c.name, c.detail);
            }
            report.exit_code()
        }
        Ok(Outcome::Streamed(code)) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

/// Builds the report for a command line without rendering it.
pub fn run_command<I, T>(argv: I) -> std::result::Result<Report, i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|_| 1)?;
    let mut sink = std::io::sink();
    match execute(&cli, &mut sink) {
        Ok(Outcome::Report(r)) => Ok(r),
        Ok(Outcome::Streamed(code)) => Err(code),
        Err(e) => Err(exit_for(&e)),
    }
}
