//! Experiment configs, byte-stable JSON artifacts, and the verification
//! path that replays artifacts instead of trusting them.
//!
//! Every artifact embeds its full config, so `verify` can recompute the
//! run and compare results byte for byte; Sat witnesses and Unsat traces
//! are additionally replayed against the axiom checkers. Artifacts carry
//! no timing data — wall-clock times go to stdout only, keeping identical
//! runs byte-identical.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{
    conradian_probe, cone_closed_check, coset_linearity_check, limit_restriction,
    orbit_restrictions, recurrence_probe, LinearityOutcome, ProbeOutcome, DEFAULT_PROBE_BOUND,
};
use crate::group::{parse_elem, Elem, GroupSpec, Word};
use crate::oracle::{parse_oracle, Cmp};
use crate::search::{
    enumerate, find_obstruction, replay_trace, solve, Certificate, TraceStep, DEFAULT_NODE_BUDGET,
};
use crate::window::{check_axioms, AxiomClass, PairState, Window, WindowRelation};
use crate::Error;

pub const DEFAULT_WITNESS_LIMIT: usize = 16;
pub const DEFAULT_MAX_RADIUS: u32 = 3;
pub const DEFAULT_CHAIN_HALF_LENGTH: u64 = 3;
pub const DEFAULT_SAMPLES: u64 = 1000;

/// One experiment: a command plus every parameter it needs. Serialized
/// into each artifact so runs can be replayed from the artifact alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// May be omitted in `--config` files, where the subcommand fills it in.
    #[serde(default)]
    pub command: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    /// `;`-separated window items: words or element literals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_words: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    /// Probe bound.
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "N")]
    pub n: Option<u64>,
    /// Coset chain half-length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_radius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub struct RunOutput {
    pub artifact: Value,
    pub summary: Vec<String>,
    pub exit: i32,
}

impl ExperimentConfig {
    fn group_spec(&self) -> Result<GroupSpec, Error> {
        self.group.parse()
    }

    fn class(&self) -> Result<AxiomClass, Error> {
        self.class
            .as_deref()
            .ok_or_else(|| Error::Parse("missing axiom class".into()))?
            .parse()
    }

    fn oracle(&self, spec: &GroupSpec) -> Result<crate::oracle::OrderOracle, Error> {
        let s = self
            .oracle
            .as_deref()
            .ok_or_else(|| Error::Parse("missing oracle".into()))?;
        parse_oracle(spec, s)
    }

    fn window(&self, spec: &GroupSpec) -> Result<Arc<Window>, Error> {
        match (self.radius, self.window_words.as_deref()) {
            (Some(r), None) => Ok(Arc::new(spec.ball(r, crate::group::DEFAULT_BALL_CAP)?)),
            (None, Some(items)) => Ok(Arc::new(parse_window_items(spec, items)?)),
            (Some(_), Some(_)) => {
                Err(Error::Parse("give either a radius or window words, not both".into()))
            }
            (None, None) => Err(Error::Parse("missing window: radius or window words".into())),
        }
    }

    fn elem(&self, spec: &GroupSpec, field: &Option<String>, name: &str) -> Result<Elem, Error> {
        let s = field
            .as_deref()
            .ok_or_else(|| Error::Parse(format!("missing element `{name}`")))?;
        parse_elem(spec, s)
    }

    fn elem_or_identity(&self, spec: &GroupSpec, field: &Option<String>) -> Result<Elem, Error> {
        match field.as_deref() {
            Some(s) => parse_elem(spec, s),
            None => Ok(spec.identity()),
        }
    }
}

/// Parses a `;`-separated window item list. Each item is tried as a
/// generator word first (keeping the word for display), then as a
/// backend literal. The identity is prepended when absent.
pub fn parse_window_items(spec: &GroupSpec, items: &str) -> Result<Window, Error> {
    let mut elems = Vec::new();
    let mut words = Vec::new();
    for item in items.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        match item.parse::<Word>().and_then(|w| Ok((spec.evaluate(&w)?, w))) {
            Ok((e, w)) => {
                elems.push(e);
                words.push(w);
            }
            Err(_) => {
                elems.push(parse_elem(spec, item)?);
                words.push(Word(Vec::new()));
            }
        }
    }
    let e = spec.identity();
    if !elems.contains(&e) {
        elems.insert(0, e);
        words.insert(0, Word(Vec::new()));
    }
    Window::from_parts(spec.clone(), elems, words)
}

/// Renders a window element for artifacts: its stored word when faithful,
/// else the backend literal. Both forms parse back via
/// [`parse_window_items`].
fn window_item_string(window: &Window, i: usize) -> String {
    let w = window.word(i);
    match window.spec().evaluate(w) {
        Ok(e) if e == *window.elem(i) => w.to_string(),
        _ => window.elem(i).to_string(),
    }
}

fn window_json(window: &Window) -> Value {
    Value::Array((0..window.len()).map(|i| Value::String(window_item_string(window, i))).collect())
}

fn relation_json(rel: &WindowRelation) -> Value {
    json!({ "digest": rel.digest(), "rows": rel.symbol_rows() })
}

fn trace_json(trace: &[TraceStep]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|step| {
                json!({
                    "axiom": step.axiom,
                    "elements": step.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "forced": step
                        .forced
                        .iter()
                        .map(|(a, b, s)| {
                            json!([a.to_string(), b.to_string(), s.symbol().to_string()])
                        })
                        .collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn probe_result_json(r: ProbeOutcome) -> Value {
    match r {
        ProbeOutcome::Found(n) => json!({ "found": n }),
        ProbeOutcome::NotFound => Value::String("not_found".into()),
    }
}

fn cmp_symbol(c: Cmp) -> &'static str {
    match c {
        Cmp::Less => "<",
        Cmp::Greater => ">",
        Cmp::Equal => "=",
        Cmp::Unrelated => "|",
    }
}

fn certificate_json(cert: &Certificate, budget: u64) -> Value {
    let mut v = json!({ "result": cert.kind(), "nodes": cert.nodes() });
    match cert {
        Certificate::Sat { relation, .. } => {
            v["witness"] = relation_json(relation);
        }
        Certificate::Unsat { trace, .. } => {
            v["trace"] = trace_json(trace);
        }
        Certificate::Exhausted { .. } => {
            v["budget"] = json!(budget);
        }
    }
    v
}

/// Runs one experiment and renders its artifact. Pure given the config
/// (and the fixed seed for sampled runs): byte-determinism of artifacts
/// rests on this function.
pub fn run_config(cfg: &ExperimentConfig) -> Result<RunOutput, Error> {
    let spec = cfg.group_spec()?;
    let config_value = serde_json::to_value(cfg)?;
    match cfg.command.as_str() {
        "solve" => {
            let class = cfg.class()?;
            let window = cfg.window(&spec)?;
            let budget = cfg.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let cert = solve(&window, class, budget);
            let mut artifact = certificate_json(&cert, budget);
            artifact["command"] = json!("solve");
            artifact["config"] = config_value;
            artifact["group"] = json!(spec.to_string());
            artifact["class"] = json!(class.to_string());
            artifact["window"] = window_json(&window);
            let mut summary = vec![format!(
                "solve group={spec} class={class} window={} result={} nodes={}",
                window.len(),
                cert.kind(),
                cert.nodes()
            )];
            match &cert {
                Certificate::Sat { relation, .. } => summary.extend(relation_table(relation)),
                Certificate::Unsat { trace, .. } => summary.extend(trace_table(trace)),
                Certificate::Exhausted { .. } => {}
            }
            let exit = if matches!(cert, Certificate::Exhausted { .. }) { 2 } else { 0 };
            Ok(RunOutput { artifact, summary, exit })
        }
        "enumerate" => {
            let class = cfg.class()?;
            let window = cfg.window(&spec)?;
            let budget = cfg.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let limit = cfg.limit.unwrap_or(DEFAULT_WITNESS_LIMIT);
            let en = enumerate(&window, class, limit, budget);
            let artifact = json!({
                "command": "enumerate",
                "config": config_value,
                "group": spec.to_string(),
                "class": class.to_string(),
                "window": window_json(&window),
                "count": en.count,
                "complete": en.complete,
                "limit": limit,
                "nodes": en.nodes,
                "witnesses": en.witnesses.iter().map(relation_json).collect::<Vec<_>>(),
            });
            let summary = vec![format!(
                "enumerate group={spec} class={class} window={} count={} complete={} nodes={}",
                window.len(),
                en.count,
                en.complete,
                en.nodes
            )];
            let exit = if en.complete { 0 } else { 2 };
            Ok(RunOutput { artifact, summary, exit })
        }
        "obstruct" => {
            let class = cfg.class()?;
            let max_radius = cfg.max_radius.unwrap_or(DEFAULT_MAX_RADIUS);
            let budget = cfg.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let report =
                find_obstruction(&spec, class, max_radius, budget, crate::group::DEFAULT_BALL_CAP)?;
            let results: Vec<Value> = report
                .results
                .iter()
                .map(|(r, cert)| {
                    let mut v = certificate_json(cert, budget);
                    // per-radius rows keep only the refutation detail
                    if let Some(obj) = v.as_object_mut() {
                        obj.remove("witness");
                    }
                    v["radius"] = json!(r);
                    v
                })
                .collect();
            let exhausted = report
                .results
                .iter()
                .any(|(_, c)| matches!(c, Certificate::Exhausted { .. }));
            let artifact = json!({
                "command": "obstruct",
                "config": config_value,
                "group": spec.to_string(),
                "class": class.to_string(),
                "max_radius": max_radius,
                "found": report.found,
                "results": results,
            });
            let found_str = match report.found {
                Some(r) => format!("radius={r}"),
                None => "none".into(),
            };
            let summary = vec![format!(
                "obstruct group={spec} class={class} max_radius={max_radius} found={found_str}"
            )];
            Ok(RunOutput { artifact, summary, exit: if exhausted { 2 } else { 0 } })
        }
        "probe" => {
            let oracle = cfg.oracle(&spec)?;
            let window = cfg.window(&spec)?;
            let g = cfg.elem_or_identity(&spec, &cfg.g)?;
            let h = cfg.elem_or_identity(&spec, &cfg.h)?;
            let bound = cfg.n.unwrap_or(DEFAULT_PROBE_BOUND);
            let report = recurrence_probe(&oracle, &g, &h, &window, bound)?;
            let artifact = json!({
                "command": "probe",
                "config": config_value,
                "group": spec.to_string(),
                "oracle": report.oracle,
                "g": g.to_string(),
                "h": h.to_string(),
                "window": window_json(&window),
                "N": bound,
                "result": probe_result_json(report.result),
                "restriction": relation_json(&report.base),
                "orbit_digest": report
                    .orbit_digests
                    .iter()
                    .map(|(n, hash)| json!({ "n": n, "hash": hash }))
                    .collect::<Vec<_>>(),
            });
            let res = match report.result {
                ProbeOutcome::Found(n) => format!("found n={n}"),
                ProbeOutcome::NotFound => format!("not_found (no recurrence up to {bound})"),
            };
            let summary = vec![format!(
                "probe group={spec} oracle={} g={g} h={h} window={} N={bound} result={res}",
                report.oracle,
                window.len()
            )];
            Ok(RunOutput { artifact, summary, exit: 0 })
        }
        "conradian" => {
            let oracle = cfg.oracle(&spec)?;
            let x = cfg.elem(&spec, &cfg.x, "x")?;
            let y = cfg.elem(&spec, &cfg.y, "y")?;
            let bound = cfg.n.unwrap_or(DEFAULT_PROBE_BOUND);
            let report = conradian_probe(&oracle, &x, &y, bound)?;
            let artifact = json!({
                "command": "conradian",
                "config": config_value,
                "group": spec.to_string(),
                "oracle": report.oracle,
                "x": x.to_string(),
                "y": y.to_string(),
                "N": bound,
                "result": probe_result_json(report.result),
                "audit": report
                    .audit
                    .iter()
                    .map(|(n, c)| json!({ "n": n, "cmp": cmp_symbol(*c) }))
                    .collect::<Vec<_>>(),
            });
            let res = match report.result {
                ProbeOutcome::Found(n) => format!("found n={n}"),
                ProbeOutcome::NotFound => format!("not_found (no witness up to {bound})"),
            };
            let summary = vec![format!(
                "conradian group={spec} oracle={} x={x} y={y} N={bound} result={res}",
                report.oracle
            )];
            Ok(RunOutput { artifact, summary, exit: 0 })
        }
        "orbit" => {
            let oracle = cfg.oracle(&spec)?;
            let window = cfg.window(&spec)?;
            let g = cfg.elem_or_identity(&spec, &cfg.g)?;
            let h = cfg.elem_or_identity(&spec, &cfg.h)?;
            let bound = cfg.n.unwrap_or(DEFAULT_PROBE_BOUND);
            let sample = orbit_restrictions(&oracle, &g, &h, &window, bound)?;
            let freq = sample.frequencies();
            let limit = limit_restriction(&sample);
            let artifact = json!({
                "command": "orbit",
                "config": config_value,
                "group": spec.to_string(),
                "oracle": sample.oracle,
                "g": g.to_string(),
                "h": h.to_string(),
                "window": window_json(&window),
                "N": bound,
                "distinct": freq.len(),
                "frequencies": freq
                    .iter()
                    .map(|fe| json!({
                        "digest": fe.digest,
                        "count": fe.count,
                        "first_n": fe.first_n,
                        "last_n": fe.last_n,
                        "rows": fe.representative.symbol_rows(),
                    }))
                    .collect::<Vec<_>>(),
                "limit": {
                    "digest": limit.digest(),
                    "rows": limit.symbol_rows(),
                    "heuristic": true,
                    "rule": "tail-majority",
                },
            });
            let summary = vec![
                format!(
                    "orbit group={spec} oracle={} g={g} h={h} window={} N={bound} distinct={}",
                    sample.oracle,
                    window.len(),
                    freq.len()
                ),
                format!("limit digest={} (heuristic: tail-majority)", limit.digest()),
            ];
            Ok(RunOutput { artifact, summary, exit: 0 })
        }
        "certify-prop41" => {
            let oracle = cfg.oracle(&spec)?;
            let g = cfg.elem_or_identity(&spec, &cfg.g)?;
            let x = cfg.elem(&spec, &cfg.x, "x")?;
            let k = cfg.k.unwrap_or(DEFAULT_CHAIN_HALF_LENGTH);
            let radius = cfg.radius.unwrap_or(2);
            let linearity = coset_linearity_check(&oracle, &g, &x, k)?;
            let window = Arc::new(spec.ball(radius, crate::group::DEFAULT_BALL_CAP)?);
            let cone = cone_closed_check(&oracle, &window)?;
            let linearity_json = match &linearity {
                LinearityOutcome::Pass { ascending } => {
                    json!({ "outcome": "pass", "ascending": ascending })
                }
                LinearityOutcome::Violation { offset, left, right, state } => json!({
                    "outcome": "violation",
                    "offset": offset,
                    "left": left.to_string(),
                    "right": right.to_string(),
                    "state": state.symbol().to_string(),
                }),
            };
            let artifact = json!({
                "command": "certify-prop41",
                "config": config_value,
                "group": spec.to_string(),
                "oracle": oracle.name(),
                "g": g.to_string(),
                "x": x.to_string(),
                "k": k,
                "radius": radius,
                "coset_linearity": linearity_json,
                "cone_violations": cone
                    .iter()
                    .map(|v| json!({
                        "x": v.x.to_string(),
                        "y": v.y.to_string(),
                        "product": v.product.to_string(),
                    }))
                    .collect::<Vec<_>>(),
            });
            let lin = match &linearity {
                LinearityOutcome::Pass { ascending: true } => "pass(ascending)".to_string(),
                LinearityOutcome::Pass { ascending: false } => "pass(descending)".to_string(),
                LinearityOutcome::Violation { offset, .. } => format!("violation(offset={offset})"),
            };
            let summary = vec![format!(
                "certify-prop41 group={spec} oracle={} g={g} x={x} k={k} linearity={lin} cone_violations={}",
                oracle.name(),
                cone.len()
            )];
            Ok(RunOutput { artifact, summary, exit: 0 })
        }
        "identity-check" => {
            let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
            let seed = cfg.seed.unwrap_or(0);
            let passed = run_identity_check(&spec, samples, seed)?;
            let artifact = json!({
                "command": "identity-check",
                "config": config_value,
                "group": spec.to_string(),
                "samples": samples,
                "seed": seed,
                "passed": passed,
                "failed": samples - passed,
            });
            let summary = vec![format!(
                "identity-check group={spec} samples={samples} seed={seed} passed={passed}/{samples}"
            )];
            Ok(RunOutput { artifact, summary, exit: 0 })
        }
        other => Err(Error::Parse(format!("unknown command `{other}`"))),
    }
}


/// Samples random pairs and checks the conjugate telescoping identity
/// x^(h^n) = x^h · [x,h]^h · [x,h]^(h²) ⋯ [x,h]^(h^(n-1)) on each.
fn run_identity_check(spec: &GroupSpec, samples: u64, seed: u64) -> Result<u64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = spec.num_generators();
    let random_elem = |rng: &mut ChaCha8Rng| -> Result<Elem, Error> {
        let len = rng.gen_range(0..=6);
        let mut w = Vec::with_capacity(len);
        for _ in 0..len {
            w.push((rng.gen_range(0..gens), if rng.gen_bool(0.5) { 1i8 } else { -1i8 }));
        }
        spec.evaluate(&Word(w))
    };
    let mut passed = 0u64;
    for _ in 0..samples {
        let x = random_elem(&mut rng)?;
        let h = random_elem(&mut rng)?;
        let n = rng.gen_range(1..=8u32);
        if spec.telescope_identity_check(&x, &h, n)? {
            passed += 1;
        }
    }
    Ok(passed)
}

fn relation_table(rel: &WindowRelation) -> Vec<String> {
    let window = rel.window();
    let mut lines = vec!["witness restriction:".to_string()];
    for (i, row) in rel.symbol_rows().iter().enumerate() {
        lines.push(format!("  {:>12}  {row}", window_item_string(window, i)));
    }
    lines
}

fn trace_table(trace: &[TraceStep]) -> Vec<String> {
    let mut lines = vec!["refutation trace:".to_string()];
    for (i, step) in trace.iter().enumerate() {
        let elems: Vec<String> = step.elements.iter().map(|e| e.to_string()).collect();
        let forced: Vec<String> = step
            .forced
            .iter()
            .map(|(a, b, s)| format!("{a} {} {b}", s.symbol()))
            .collect();
        lines.push(format!(
            "  {i}: {} [{}] forces {}",
            step.axiom,
            elems.join(", "),
            if forced.is_empty() { "contradiction".to_string() } else { forced.join("; ") }
        ));
    }
    lines
}

/// Canonical artifact rendering: pretty JSON with sorted keys and a
/// trailing newline.
pub fn render_artifact(artifact: &Value) -> String {
    let mut s = serde_json::to_string_pretty(artifact).expect("artifact serializes");
    s.push('\n');
    s
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str, Error> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Verify(format!("artifact missing string field `{key}`")))
}

fn static_axiom(name: &str) -> Result<&'static str, Error> {
    Ok(match name {
        "decision" => "decision",
        "transitivity" => "transitivity",
        "left-invariance" => "left-invariance",
        "right-invariance" => "right-invariance",
        "locally-invariant" => "locally-invariant",
        "conradian" => "conradian",
        other => return Err(Error::Verify(format!("unknown axiom `{other}` in artifact"))),
    })
}

fn parse_relation(window: &Arc<Window>, v: &Value) -> Result<WindowRelation, Error> {
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Verify("relation export missing rows".into()))?;
    let n = window.len();
    if rows.len() != n {
        return Err(Error::Verify("relation row count does not match window".into()));
    }
    let mut rel = WindowRelation::new_undecided(window.clone());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_str().ok_or_else(|| Error::Verify("relation row is not a string".into()))?;
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != n {
            return Err(Error::Verify("relation row length does not match window".into()));
        }
        for (j, &c) in chars.iter().enumerate().skip(i + 1) {
            let s = PairState::from_symbol(c)
                .ok_or_else(|| Error::Verify(format!("bad relation symbol `{c}`")))?;
            rel.set(i, j, s);
        }
    }
    Ok(rel)
}

fn parse_trace(spec: &GroupSpec, v: &Value) -> Result<Vec<TraceStep>, Error> {
    let steps = v.as_array().ok_or_else(|| Error::Verify("trace is not an array".into()))?;
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let axiom = static_axiom(get_str(step, "axiom")?)?;
        let elements = step
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Verify("trace step missing elements".into()))?
            .iter()
            .map(|e| {
                e.as_str()
                    .ok_or_else(|| Error::Verify("trace element is not a string".into()))
                    .and_then(|s| parse_elem(spec, s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let forced = step
            .get("forced")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Verify("trace step missing forced entries".into()))?
            .iter()
            .map(|f| -> Result<(Elem, Elem, PairState), Error> {
                let t = f
                    .as_array()
                    .filter(|t| t.len() == 3)
                    .ok_or_else(|| Error::Verify("forced entry is not a triple".into()))?;
                let a = parse_elem(
                    spec,
                    t[0].as_str().ok_or_else(|| Error::Verify("bad forced entry".into()))?,
                )?;
                let b = parse_elem(
                    spec,
                    t[1].as_str().ok_or_else(|| Error::Verify("bad forced entry".into()))?,
                )?;
                let sym = t[2]
                    .as_str()
                    .and_then(|s| s.chars().next())
                    .ok_or_else(|| Error::Verify("bad forced entry".into()))?;
                let s = PairState::from_symbol(sym)
                    .ok_or_else(|| Error::Verify(format!("bad pair symbol `{sym}`")))?;
                Ok((a, b, s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(TraceStep { axiom, elements, forced });
    }
    Ok(out)
}

/// Replays an artifact. Witnesses run through the axiom checker, Unsat
/// traces replay to their contradiction, and the whole run is recomputed
/// from the embedded config and compared field for field.
pub fn verify_artifact(artifact: &Value) -> Result<(), Error> {
    let cfg: ExperimentConfig = serde_json::from_value(
        artifact
            .get("config")
            .cloned()
            .ok_or_else(|| Error::Verify("artifact has no embedded config".into()))?,
    )?;
    if cfg.command != get_str(artifact, "command")? {
        return Err(Error::Verify("artifact command does not match its config".into()));
    }

    // checker-based replay of solve certificates before recomputation
    if cfg.command == "solve" {
        let spec: GroupSpec = get_str(artifact, "group")?.parse()?;
        let class: AxiomClass = get_str(artifact, "class")?.parse()?;
        let items: Vec<String> = artifact
            .get("window")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Verify("solve artifact missing window".into()))?
            .iter()
            .map(|v| v.as_str().map(str::to_string))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Verify("window item is not a string".into()))?;
        let window = Arc::new(parse_window_items(&spec, &items.join(";"))?);
        match get_str(artifact, "result")? {
            "sat" => {
                let witness = artifact
                    .get("witness")
                    .ok_or_else(|| Error::Verify("sat artifact has no witness".into()))?;
                let rel = parse_relation(&window, witness)?;
                let violations = check_axioms(&rel, class);
                if !violations.is_empty() {
                    return Err(Error::Verify(format!(
                        "witness fails {} axiom check(s)",
                        violations.len()
                    )));
                }
                if rel.digest() != get_str(witness, "digest")? {
                    return Err(Error::Verify("witness digest mismatch".into()));
                }
            }
            "unsat" => {
                let trace = parse_trace(
                    &spec,
                    artifact
                        .get("trace")
                        .ok_or_else(|| Error::Verify("unsat artifact has no trace".into()))?,
                )?;
                replay_trace(&window, class, &trace)?;
            }
            "exhausted" => {}
            other => return Err(Error::Verify(format!("unknown result `{other}`"))),
        }
    }

    let recomputed = run_config(&cfg)?;
    if &recomputed.artifact != artifact {
        return Err(Error::Verify("artifact does not match recomputation from its config".into()));
    }
    Ok(())
}
