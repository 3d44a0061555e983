use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use conic_forge::brauer::{graph_from_witnesses, Component, DiscriminantGraph, Hypotheses};
use conic_forge::conic::{projective_points, BundleFile, GradedConicBundle};
use conic_forge::gf::is_prime;
use conic_forge::hpt::{self, HptOptions};
use conic_forge::localforms::{thm_ch0_hypotheses, two_surface_witnesses, Ch0Data, PlaneCurve};
use conic_forge::pipeline::certs::split_witnesses;
use conic_forge::pipeline::{
    build_with_retries, example_ch0_hypotheses, example_graph, verify_checklist, CheckRecord, ChecklistOptions,
    Evidence, Status, VerificationReport,
};
use conic_forge::{Fp, MultiPoly, ProjPoint};

use crate::manifest::RunManifest;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RETRIES: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Result of one command: exit code, main report, extra files and timings.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub manifest: RunManifest,
    /// The main report; always carries the manifest under "manifest".
    pub document: Value,
    pub text: String,
    /// Extra files written next to the report, by file name.
    pub artifacts: Vec<(String, Value)>,
    pub timings: BTreeMap<String, f64>,
}

#[derive(Default)]
struct Clock(BTreeMap<String, f64>);

impl Clock {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.0.insert(stage.to_string(), t.elapsed().as_secs_f64());
        out
    }
}

fn with_manifest(manifest: &RunManifest, mut body: Value) -> Value {
    body["manifest"] = serde_json::to_value(manifest).expect("manifest serializes");
    body
}

fn verdict_code(reports: &[&VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.passed()) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Plane curve record of a factors file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    pub plane: String,
    pub equation: String,
}

/// Discriminant components of a bundle file, optionally with the nodes of each
/// component and the curves of their intersection (two components only).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FactorsFile {
    pub components: Vec<String>,
    #[serde(default)]
    pub names: Vec<String>,
    #[serde(default)]
    pub nodes: Vec<Vec<Vec<u64>>>,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
}

pub fn hpt_factors(inst: &hpt::HptInstance) -> FactorsFile {
    let coords = |v: &[ProjPoint]| v.iter().map(|p| p.coords().to_vec()).collect();
    FactorsFile {
        components: vec![inst.d_plus.to_string(), inst.d_minus.to_string()],
        names: vec!["D+".into(), "D-".into()],
        nodes: vec![coords(&inst.nodes_plus), coords(&inst.nodes_minus)],
        curves: inst
            .curves
            .iter()
            .map(|c| CurveSpec { name: c.name.clone(), plane: c.plane.to_string(), equation: c.equation.to_string() })
            .collect(),
    }
}

pub fn verify_hpt(prime: u64, exhaustive_bound: u64) -> Result<Outcome, CliError> {
    let manifest = RunManifest {
        primes: vec![prime],
        ..RunManifest::new("verify-hpt").option("exhaustive_bound", exhaustive_bound)
    };
    let inst = hpt::build(prime).map_err(input)?;
    let opts = HptOptions { exhaustive_bound, ..Default::default() };
    let mut clock = Clock::default();
    let report = clock.time("verify_all", || hpt::verify_all(&inst, &opts));
    let ch0 = clock.time("ch0", || hpt::hpt_ch0(&inst));
    let graph = clock.time("brauer_graph", || hpt::hpt_graph(&inst, &opts));
    let code = verdict_code(&[&report, &ch0]);
    let document = with_manifest(
        &manifest,
        json!({ "fixture": inst.summary(), "report": report, "ch0": ch0 }),
    );
    let mut artifacts = vec![
        ("bundle.json".to_string(), json!(BundleFile::from_bundle(&inst.bundle))),
        ("factors.json".to_string(), json!(hpt_factors(&inst))),
    ];
    if let Ok(g) = &graph {
        artifacts.push(("graph.json".to_string(), json!(g)));
    }
    let text = format!("HPT fixture over F_{prime}\n{}\nCH_0 hypotheses\n{}", report.to_text(), ch0.to_text());
    Ok(Outcome { code, manifest, document, text, artifacts, timings: clock.0 })
}

pub fn build_example(prime: u64, seed: u64, retries: usize) -> Result<Outcome, CliError> {
    let manifest = RunManifest { primes: vec![prime], seed: Some(seed), retries: Some(retries), ..RunManifest::new("build-example") };
    if prime < 37 || !is_prime(prime) {
        return Err(CliError::Input(format!("--prime must be an odd prime >= 37, got {prime}")));
    }
    let field = Fp::new(prime).map_err(input)?;
    let mut clock = Clock::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let built = clock.time("construction", || build_with_retries(field, &mut rng, retries));
    let (ex, attempts) = match built {
        Ok(x) => x,
        Err(attempts) => {
            let text = attempts.iter().map(|a| format!("attempt {}: {}\n", a.index, a.outcome)).collect::<String>()
                + &format!("retry budget exhausted after {} attempts\n", attempts.len());
            let document = with_manifest(&manifest, json!({ "error": "retries exhausted", "attempts": attempts }));
            return Ok(Outcome { code: EXIT_RETRIES, manifest, document, text, artifacts: vec![], timings: clock.0 });
        }
    };
    let opts = ChecklistOptions { seed, ..Default::default() };
    let (report, sing) = clock.time("checklist", || verify_checklist(&ex, &opts));
    let ch0 = clock.time("ch0", || example_ch0_hypotheses(&ex, &report, &sing, &opts));
    let graph = clock.time("brauer", || example_graph(&ex, &opts));
    let brauer = match &graph {
        Ok(g) => json!({ "graph": g, "result": g.compute_h().map_err(|e| e.to_string()) }),
        Err(e) => json!({ "error": e }),
    };
    let shape = ex.n.degree_shape();
    let code = verdict_code(&[&report, &ch0]);
    let document = with_manifest(
        &manifest,
        json!({
            "attempts": attempts,
            "graded_type": ex.n.graded_type(),
            "shape": shape,
            "report": report,
            "ch0": ch0,
            "brauer": brauer,
        }),
    );
    let mut text = format!(
        "example over F_{prime}, seed {seed}, {} attempt(s)\nentry degrees {:?}\n{}\nCH_0 hypotheses\n{}",
        attempts.len(),
        shape,
        report.to_text(),
        ch0.to_text()
    );
    if let Some(r) = brauer.get("result").and_then(|r| r.get("Ok")) {
        text.push_str(&format!("Brauer quotient order {}\n", r["order_of_quotient"]));
    }
    let artifacts = vec![
        ("bundle.json".to_string(), json!(BundleFile::from_bundle(&ex.n))),
        ("brauer.json".to_string(), brauer),
    ];
    Ok(Outcome { code, manifest, document, text, artifacts, timings: clock.0 })
}

pub fn brauer(path: &Path) -> Result<Outcome, CliError> {
    let bytes = read(path)?;
    let manifest = RunManifest::new("brauer").input("graph", &bytes);
    let graph: DiscriminantGraph = serde_json::from_slice(&bytes).map_err(|e| input(format!("graph file: {e}")))?;
    let h = graph.compute_h().map_err(input)?;
    let text = format!(
        "components {}\nbasis of H: {}\n|H| = {}\nquotient order {}\nequality certified: {}\n",
        graph.components.len(),
        h.basis.join(" "),
        h.order_h,
        h.order_of_quotient,
        h.equality_certified
    );
    let document = with_manifest(&manifest, json!({ "result": h }));
    Ok(Outcome { code: EXIT_PASS, manifest, document, text, artifacts: vec![], timings: BTreeMap::new() })
}

fn parse_in(m: &GradedConicBundle, s: &str) -> Result<MultiPoly, CliError> {
    MultiPoly::parse(s, m.vars(), m.field(), true).map_err(|e| input(format!("{s:?}: {e}")))
}

pub fn check_bundle(path: &Path, factors: Option<&Path>, seed: u64, scan_bound: u64) -> Result<Outcome, CliError> {
    let bytes = read(path)?;
    let mut manifest = RunManifest { seed: Some(seed), ..RunManifest::new("check-bundle").option("scan_bound", scan_bound) }
        .input("bundle", &bytes);
    let file: BundleFile = serde_json::from_slice(&bytes).map_err(|e| input(format!("bundle file: {e}")))?;
    let m = file.to_bundle().map_err(input)?;
    let field = m.field();
    let p = field.modulus();
    manifest.primes = vec![p];
    let factors: Option<FactorsFile> = match factors {
        Some(f) => {
            let b = read(f)?;
            manifest = manifest.input("factors", &b);
            Some(serde_json::from_slice(&b).map_err(|e| input(format!("factors file: {e}")))?)
        }
        None => None,
    };
    let comps: Vec<MultiPoly> = match &factors {
        Some(f) => f.components.iter().map(|s| parse_in(&m, s)).collect::<Result<_, _>>()?,
        None => vec![],
    };
    let mut clock = Clock::default();
    let det = m.discriminant();
    let mut checks = vec![CheckRecord::new("graded type", p, Evidence::Exact)
        .status(true)
        .summary(format!("type {:?}", m.graded_type()))
        .witnesses(json!({ "type": m.graded_type(), "shape": m.degree_shape() }))];
    checks.push(
        CheckRecord::new("discriminant nonzero", p, Evidence::Exact)
            .status(!det.is_zero())
            .summary(format!("det has degree {:?}", det.homogeneous_degree())),
    );
    let n = m.vars().len();
    let rank0 = CheckRecord::new("rank 0 locus empty", p, Evidence::Exact);
    checks.push(if p <= scan_bound {
        let pts = clock.time("rank0_scan", || m.rank_locus_scan(0, projective_points(field, n)));
        rank0.status(pts.is_empty()).summary(format!("{} rational points of rank 0", pts.len())).witnesses(pts)
    } else {
        rank0.with_status(Status::Skipped).summary(format!("p = {p} above the scan bound {scan_bound}"))
    });

    let mut ch0 = None;
    let brauer_graph: Result<DiscriminantGraph, String>;
    if comps.is_empty() {
        brauer_graph = Ok(DiscriminantGraph {
            components: vec![Component { name: "D".into(), residue_nontrivial: true }],
            curves: vec![],
            hypotheses: Hypotheses::all(),
            provenance: vec!["no factors given: discriminant treated as irreducible, Brauer quotient trivial".into()],
        });
    } else {
        let product = comps.iter().skip(1).fold(comps[0].clone(), |a, c| a.mul(c));
        let scalar = det.proportional(&product);
        checks.push(
            CheckRecord::new("discriminant factorization", p, Evidence::Exact)
                .status(scalar.is_some())
                .summary(format!("det M is a unit times the product of {} factors", comps.len()))
                .witnesses(json!({ "scalar": scalar.map(|c| field.to_signed(c)) })),
        );
        if n == 4 {
            let covers: Vec<Value> = comps
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
                    match split_witnesses(&m, s, &mut rng, 400) {
                        Ok(w) => json!({ "component": k, "split": w.split_point, "nonsplit": w.nonsplit_point }),
                        Err(e) => json!({ "component": k, "error": e.to_string() }),
                    }
                })
                .collect();
            let ok = covers.iter().all(|c| c.get("error").is_none());
            checks.push(
                CheckRecord::new("double covers nontrivial", p, Evidence::Sampling)
                    .status(ok)
                    .summary("a split and a nonsplit rank-2 fiber over each component")
                    .witnesses(covers),
            );
        }
        brauer_graph = if comps.len() == 2 && n == 4 {
            let f = factors.as_ref().unwrap();
            let nodes = |i: usize| -> Result<Vec<ProjPoint>, CliError> {
                f.nodes
                    .get(i)
                    .map(|v| v.as_slice())
                    .unwrap_or_default()
                    .iter()
                    .map(|c| ProjPoint::new(field, c).ok_or_else(|| input("node with zero coordinates")))
                    .collect()
            };
            let curves = f
                .curves
                .iter()
                .map(|c| Ok(PlaneCurve::new(&c.name, parse_in(&m, &c.plane)?, parse_in(&m, &c.equation)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let data = Ch0Data { m: m.clone(), x1: comps[0].clone(), x2: comps[1].clone(), nodes1: nodes(0)?, nodes2: nodes(1)?, curves };
            if !data.curves.is_empty() {
                ch0 = Some(clock.time("ch0", || thm_ch0_hypotheses(&data, seed)));
            }
            let names = [
                f.names.first().map_or("X'", |s| s.as_str()),
                f.names.get(1).map_or("X''", |s| s.as_str()),
            ];
            let (cw, kw) = clock.time("brauer", || two_surface_witnesses(&data, names, 400, seed));
            graph_from_witnesses(&cw, &kw, Hypotheses::all()).map_err(|e| e.to_string())
        } else {
            Err(format!("Brauer graph needs two components in P^3 with their curves (got {})", comps.len()))
        };
    }
    let report = VerificationReport::new(checks);
    let mut reports = vec![&report];
    if let Some(c) = &ch0 {
        reports.push(c);
    }
    let code = verdict_code(&reports);
    let brauer = match &brauer_graph {
        Ok(g) => json!({ "graph": g, "result": g.compute_h().map_err(|e| e.to_string()) }),
        Err(e) => json!({ "error": e }),
    };
    let mut text = report.to_text();
    if let Ok(g) = &brauer_graph {
        for note in &g.provenance {
            text.push_str(&format!("note: {note}\n"));
        }
    }
    if let Some(c) = &ch0 {
        text.push_str(&format!("CH_0 hypotheses\n{}", c.to_text()));
    }
    if let Some(r) = brauer.get("result").and_then(|r| r.get("Ok")) {
        text.push_str(&format!("Brauer quotient order {}\n", r["order_of_quotient"]));
    }
    let document = with_manifest(&manifest, json!({ "report": report, "ch0": ch0, "brauer": brauer }));
    Ok(Outcome { code, manifest, document, text, artifacts: vec![], timings: clock.0 })
}
