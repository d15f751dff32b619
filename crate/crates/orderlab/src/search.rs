//! Backtracking constraint solver over window-relation assignments: find a
//! violation-free relation on a window, prove none exists, or enumerate
//! all of them.
//!
//! After each assignment the solver closes under transitivity and all
//! invariance instances of the class until fixpoint; a contradiction is a
//! pair forced to two distinct decided states. Unsat certificates carry
//! the propagation chain of the final refutation, reconstructed from
//! reason pointers, so they can be replayed independently.

use std::collections::HashMap;
use std::sync::Arc;

use crate::group::Elem;
use crate::window::{check_axioms, AxiomClass, PairState, Window, WindowRelation};
use crate::Error;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// One replayable step of a refutation: an axiom instance (or decision)
/// together with the entries it forces.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub axiom: &'static str,
    pub elements: Vec<Elem>,
    pub forced: Vec<(Elem, Elem, PairState)>,
}

/// Result of a window/axiom-class query.
#[derive(Clone, Debug)]
pub enum Certificate {
    Sat { relation: WindowRelation, nodes: u64 },
    Unsat { trace: Vec<TraceStep>, nodes: u64 },
    Exhausted { nodes: u64, budget: u64 },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Sat { .. } => "sat",
            Certificate::Unsat { .. } => "unsat",
            Certificate::Exhausted { .. } => "exhausted",
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            Certificate::Sat { nodes, .. }
            | Certificate::Unsat { nodes, .. }
            | Certificate::Exhausted { nodes, .. } => *nodes,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Exact count when `complete`, lower bound otherwise.
    pub count: u64,
    pub complete: bool,
    pub witnesses: Vec<WindowRelation>,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    /// Certificate per radius, in increasing order, up to and including
    /// the first Unsat radius (or `max_radius`).
    pub results: Vec<(u32, Certificate)>,
    pub found: Option<u32>,
}

type Pid = u32;

#[derive(Clone, Debug)]
enum Reason {
    Decision,
    Rule { axiom: &'static str, elements: Vec<usize>, premises: Vec<Pid> },
}

#[derive(Clone, Copy, Debug)]
struct Lit {
    pid: Pid,
    /// Canonical state of the pair that satisfies the literal.
    state: PairState,
}

struct LiInstance {
    x: usize,
    y: usize,
    lits: [Lit; 2],
}

struct ConradianInstance {
    x: usize,
    y: usize,
    premises: [Lit; 2],
    /// `None` when `x y^2 = y`, which refutes the instance outright.
    conclusion: Option<Lit>,
}

enum Conflict {
    /// Forcing `attempted` on a pair already decided otherwise.
    Assign { pid: Pid, attempted: PairState, reason: Reason },
    /// An instance whose conclusion is structurally impossible.
    Absurd { elements: Vec<usize>, axiom: &'static str, premises: Vec<Pid> },
}

struct Engine {
    window: Arc<Window>,
    class: AxiomClass,
    pairs: Vec<(usize, usize)>,
    pid_of: Vec<Vec<Pid>>,
    prod: Vec<Vec<Option<usize>>>,
    states: Vec<PairState>,
    reasons: Vec<Option<Reason>>,
    trail: Vec<Pid>,
    trail_pos: Vec<usize>,
    li_instances: Vec<LiInstance>,
    li_by_pid: HashMap<Pid, Vec<usize>>,
    con_instances: Vec<ConradianInstance>,
    con_by_pid: HashMap<Pid, Vec<usize>>,
    nodes: u64,
    budget: u64,
    last_refutation: Vec<TraceStep>,
}

impl Engine {
    fn new(window: Arc<Window>, class: AxiomClass, budget: u64) -> Engine {
        let n = window.len();
        let prod = window.product_table();
        let inv = window.inverse_table();
        let e_pos = window.identity_pos();

        // variable order: combined shortest-word length, then indices
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
            }
        }
        pairs.sort_by_key(|&(i, j)| (window.word(i).len() + window.word(j).len(), i, j));
        let mut pid_of = vec![vec![0 as Pid; n]; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            pid_of[i][j] = p as Pid;
            pid_of[j][i] = p as Pid;
        }

        let lit = |a: usize, b: usize| -> Lit {
            // literal "a < b" on the canonical pair
            let pid = pid_of[a][b];
            let state = if a < b { PairState::Less } else { PairState::Greater };
            Lit { pid, state }
        };

        let mut li_instances = Vec::new();
        let mut li_by_pid: HashMap<Pid, Vec<usize>> = HashMap::new();
        if class.has_locally_invariant() {
            for x in 0..n {
                for y in 0..n {
                    if Some(y) == e_pos {
                        continue;
                    }
                    let Some(yi) = inv[y] else { continue };
                    let (Some(xy), Some(xyi)) = (prod[x][y], prod[x][yi]) else { continue };
                    let inst = LiInstance { x, y, lits: [lit(x, xy), lit(x, xyi)] };
                    let idx = li_instances.len();
                    li_by_pid.entry(inst.lits[0].pid).or_default().push(idx);
                    if inst.lits[1].pid != inst.lits[0].pid {
                        li_by_pid.entry(inst.lits[1].pid).or_default().push(idx);
                    }
                    li_instances.push(inst);
                }
            }
        }

        let mut con_instances = Vec::new();
        let mut con_by_pid: HashMap<Pid, Vec<usize>> = HashMap::new();
        if class.has_conradian() {
            if let Some(e) = e_pos {
                for x in 0..n {
                    if x == e {
                        continue;
                    }
                    for y in 0..n {
                        if y == e {
                            continue;
                        }
                        // x y^2 need not pass through y^2 inside the window
                        let spec = window.spec();
                        let Ok(y2) = spec.multiply(window.elem(y), window.elem(y)) else {
                            continue;
                        };
                        let Ok(xy2_elem) = spec.multiply(window.elem(x), &y2) else { continue };
                        let Some(xy2) = window.index_of(&xy2_elem) else { continue };
                        let conclusion = if xy2 == y { None } else { Some(lit(y, xy2)) };
                        let inst = ConradianInstance {
                            x,
                            y,
                            premises: [lit(e, x), lit(e, y)],
                            conclusion,
                        };
                        let idx = con_instances.len();
                        for pr in &inst.premises {
                            con_by_pid.entry(pr.pid).or_default().push(idx);
                        }
                        con_instances.push(inst);
                    }
                }
            }
        }

        let npairs = pairs.len();
        Engine {
            window,
            class,
            pairs,
            pid_of,
            prod,
            states: vec![PairState::Undecided; npairs],
            reasons: vec![None; npairs],
            trail: Vec::new(),
            trail_pos: vec![usize::MAX; npairs],
            li_instances,
            li_by_pid,
            con_instances,
            con_by_pid,
            nodes: 0,
            budget,
            last_refutation: Vec::new(),
        }
    }

    fn oriented(&self, a: usize, b: usize) -> PairState {
        let s = self.states[self.pid_of[a][b] as usize];
        if a < b {
            s
        } else {
            s.flip()
        }
    }

    /// Set entry(a,b) = s; `a,b` in any order.
    fn force(&mut self, a: usize, b: usize, s: PairState, reason: Reason) -> Result<(), Conflict> {
        let (pid, canon) = if a < b {
            (self.pid_of[a][b], s)
        } else {
            (self.pid_of[b][a], s.flip())
        };
        let cur = self.states[pid as usize];
        if cur == PairState::Undecided {
            self.states[pid as usize] = canon;
            self.reasons[pid as usize] = Some(reason);
            self.trail_pos[pid as usize] = self.trail.len();
            self.trail.push(pid);
            Ok(())
        } else if cur == canon {
            Ok(())
        } else {
            Err(Conflict::Assign { pid, attempted: canon, reason })
        }
    }

    fn undo_to(&mut self, checkpoint: usize) {
        while self.trail.len() > checkpoint {
            let pid = self.trail.pop().unwrap();
            self.states[pid as usize] = PairState::Undecided;
            self.reasons[pid as usize] = None;
            self.trail_pos[pid as usize] = usize::MAX;
        }
    }

    /// Process trail entries from `cursor` to fixpoint.
    fn propagate(&mut self, mut cursor: usize) -> Result<(), Conflict> {
        while cursor < self.trail.len() {
            let pid = self.trail[cursor];
            cursor += 1;
            self.process(pid)?;
        }
        Ok(())
    }

    fn process(&mut self, pid: Pid) -> Result<(), Conflict> {
        let (i, j) = self.pairs[pid as usize];
        let s = self.states[pid as usize];
        let n = self.window.len();

        if s == PairState::Less || s == PairState::Greater {
            let (a, b) = if s == PairState::Less { (i, j) } else { (j, i) }; // a < b

            // transitivity
            for k in 0..n {
                if k == a || k == b {
                    continue;
                }
                if self.oriented(b, k) == PairState::Less {
                    let prem = vec![pid, self.pid_of[b][k]];
                    self.force(
                        a,
                        k,
                        PairState::Less,
                        Reason::Rule { axiom: "transitivity", elements: vec![a, b, k], premises: prem },
                    )?;
                }
                if self.oriented(k, a) == PairState::Less {
                    let prem = vec![self.pid_of[k][a], pid];
                    self.force(
                        k,
                        b,
                        PairState::Less,
                        Reason::Rule { axiom: "transitivity", elements: vec![k, a, b], premises: prem },
                    )?;
                }
            }

            if self.class.has_left_invariance() {
                for z in 0..n {
                    if Some(z) == self.window.identity_pos() {
                        continue;
                    }
                    let (Some(za), Some(zb)) = (self.prod[z][a], self.prod[z][b]) else { continue };
                    self.force(
                        za,
                        zb,
                        PairState::Less,
                        Reason::Rule {
                            axiom: "left-invariance",
                            elements: vec![z, a, b],
                            premises: vec![pid],
                        },
                    )?;
                }
            }
            if self.class.has_right_invariance() {
                for z in 0..n {
                    if Some(z) == self.window.identity_pos() {
                        continue;
                    }
                    let (Some(az), Some(bz)) = (self.prod[a][z], self.prod[b][z]) else { continue };
                    self.force(
                        az,
                        bz,
                        PairState::Less,
                        Reason::Rule {
                            axiom: "right-invariance",
                            elements: vec![z, a, b],
                            premises: vec![pid],
                        },
                    )?;
                }
            }
        }

        if let Some(instances) = self.li_by_pid.get(&pid).cloned() {
            for idx in instances {
                self.eval_li(idx)?;
            }
        }
        if let Some(instances) = self.con_by_pid.get(&pid).cloned() {
            for idx in instances {
                self.eval_conradian(idx)?;
            }
        }
        Ok(())
    }

    fn lit_status(&self, l: Lit) -> Option<bool> {
        let s = self.states[l.pid as usize];
        if s == PairState::Undecided {
            None
        } else {
            Some(s == l.state)
        }
    }

    fn eval_li(&mut self, idx: usize) -> Result<(), Conflict> {
        let (x, y, l0, l1) = {
            let inst = &self.li_instances[idx];
            (inst.x, inst.y, inst.lits[0], inst.lits[1])
        };
        let s0 = self.lit_status(l0);
        let s1 = self.lit_status(l1);
        if s0 == Some(true) || s1 == Some(true) {
            return Ok(());
        }
        // force the surviving disjunct once the other is falsified
        let unit = l0.pid == l1.pid;
        if unit || s0 == Some(false) {
            let premises = if unit { vec![] } else { vec![l0.pid] };
            let (a, b) = self.pairs[l1.pid as usize];
            let (fa, fb, fs) = (a, b, l1.state);
            self.force(
                fa,
                fb,
                fs,
                Reason::Rule { axiom: "locally-invariant", elements: vec![x, y], premises },
            )?;
        } else if s1 == Some(false) {
            let (a, b) = self.pairs[l0.pid as usize];
            self.force(
                a,
                b,
                l0.state,
                Reason::Rule {
                    axiom: "locally-invariant",
                    elements: vec![x, y],
                    premises: vec![l1.pid],
                },
            )?;
        }
        Ok(())
    }

    fn eval_conradian(&mut self, idx: usize) -> Result<(), Conflict> {
        let (x, y, p0, p1, concl) = {
            let inst = &self.con_instances[idx];
            (inst.x, inst.y, inst.premises[0], inst.premises[1], inst.conclusion)
        };
        if self.lit_status(p0) != Some(true) || self.lit_status(p1) != Some(true) {
            return Ok(());
        }
        match concl {
            Some(l) => {
                let (a, b) = self.pairs[l.pid as usize];
                self.force(
                    a,
                    b,
                    l.state,
                    Reason::Rule {
                        axiom: "conradian",
                        elements: vec![x, y],
                        premises: vec![p0.pid, p1.pid],
                    },
                )
            }
            None => Err(Conflict::Absurd {
                elements: vec![x, y],
                axiom: "conradian",
                premises: vec![p0.pid, p1.pid],
            }),
        }
    }

    /// Forces every instance that is unit before any decision.
    fn root_propagate(&mut self) -> Result<(), Conflict> {
        for idx in 0..self.li_instances.len() {
            self.eval_li(idx)?;
        }
        self.propagate(0)
    }

    fn step_of(&self, pid: Pid) -> TraceStep {
        let (i, j) = self.pairs[pid as usize];
        let state = self.states[pid as usize];
        let forced = vec![(self.window.elem(i).clone(), self.window.elem(j).clone(), state)];
        match self.reasons[pid as usize].as_ref().expect("assigned pair has a reason") {
            Reason::Decision => TraceStep { axiom: "decision", elements: Vec::new(), forced },
            Reason::Rule { axiom, elements, .. } => TraceStep {
                axiom,
                elements: elements.iter().map(|&e| self.window.elem(e).clone()).collect(),
                forced,
            },
        }
    }

    /// Reconstructs the minimal chain of assignments behind a conflict.
    fn refutation_chain(&self, conflict: &Conflict) -> Vec<TraceStep> {
        let mut needed: Vec<Pid> = Vec::new();
        let mut stack: Vec<Pid> = Vec::new();
        let (final_step, clashing_pid) = match conflict {
            Conflict::Assign { pid, attempted, reason } => {
                let (i, j) = self.pairs[*pid as usize];
                let forced =
                    vec![(self.window.elem(i).clone(), self.window.elem(j).clone(), *attempted)];
                let step = match reason {
                    Reason::Decision => TraceStep { axiom: "decision", elements: Vec::new(), forced },
                    Reason::Rule { axiom, elements, premises } => {
                        stack.extend(premises.iter().copied());
                        TraceStep {
                            axiom,
                            elements: elements.iter().map(|&e| self.window.elem(e).clone()).collect(),
                            forced,
                        }
                    }
                };
                (step, Some(*pid))
            }
            Conflict::Absurd { elements, axiom, premises } => {
                stack.extend(premises.iter().copied());
                let step = TraceStep {
                    axiom,
                    elements: elements.iter().map(|&e| self.window.elem(e).clone()).collect(),
                    forced: Vec::new(),
                };
                (step, None)
            }
        };
        if let Some(pid) = clashing_pid {
            stack.push(pid); // ancestors of the existing, clashing assignment
        }
        while let Some(pid) = stack.pop() {
            if needed.contains(&pid) {
                continue;
            }
            needed.push(pid);
            if let Some(Reason::Rule { premises, .. }) = self.reasons[pid as usize].as_ref() {
                stack.extend(premises.iter().copied());
            }
        }
        needed.sort_by_key(|&pid| self.trail_pos[pid as usize]);
        let mut steps: Vec<TraceStep> = needed.iter().map(|&p| self.step_of(p)).collect();
        steps.push(final_step);
        steps
    }

    fn next_unassigned(&self) -> Option<Pid> {
        (0..self.pairs.len())
            .map(|p| p as Pid)
            .find(|&p| self.states[p as usize] == PairState::Undecided)
    }

    fn values(&self) -> &'static [PairState] {
        if self.class.admits_unrelated() {
            &[PairState::Less, PairState::Greater, PairState::Unrelated]
        } else {
            &[PairState::Less, PairState::Greater]
        }
    }

    fn build_relation(&self) -> WindowRelation {
        let mut rel = WindowRelation::new_undecided(self.window.clone());
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            rel.set(i, j, self.states[p]);
        }
        rel
    }

    /// DFS; calls `on_sat` at each full assignment. Returns Ok(true) to
    /// stop early (sat found in solve mode), Err on budget exhaustion.
    fn search(&mut self, stop_at_first: bool, on_sat: &mut dyn FnMut(WindowRelation)) -> Result<bool, ()> {
        let Some(pid) = self.next_unassigned() else {
            let rel = self.build_relation();
            debug_assert!(check_axioms(&rel, self.class).is_empty());
            on_sat(rel);
            return Ok(stop_at_first);
        };
        let (i, j) = self.pairs[pid as usize];
        for &value in self.values() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            let checkpoint = self.trail.len();
            let result = self
                .force(i, j, value, Reason::Decision)
                .and_then(|()| self.propagate(checkpoint));
            match result {
                Ok(()) => {
                    if self.search(stop_at_first, on_sat)? {
                        return Ok(true);
                    }
                }
                Err(conflict) => {
                    self.last_refutation = self.refutation_chain(&conflict);
                }
            }
            self.undo_to(checkpoint);
        }
        Ok(false)
    }
}

/// Decides window-satisfiability of the axiom class. Deterministic given
/// the fixed variable and value ordering.
pub fn solve(window: &Arc<Window>, class: AxiomClass, budget: u64) -> Certificate {
    let mut engine = Engine::new(window.clone(), class, budget);
    if let Err(conflict) = engine.root_propagate() {
        let trace = engine.refutation_chain(&conflict);
        return Certificate::Unsat { trace, nodes: engine.nodes };
    }
    let mut witness = None;
    match engine.search(true, &mut |rel| witness = Some(rel)) {
        Err(()) => Certificate::Exhausted { nodes: engine.nodes, budget },
        Ok(_) => match witness {
            Some(relation) => Certificate::Sat { relation, nodes: engine.nodes },
            None => Certificate::Unsat { trace: engine.last_refutation.clone(), nodes: engine.nodes },
        },
    }
}

/// Counts (and collects up to `limit`) all fully decided violation-free
/// relations on the window.
pub fn enumerate(window: &Arc<Window>, class: AxiomClass, limit: usize, budget: u64) -> Enumeration {
    let mut engine = Engine::new(window.clone(), class, budget);
    if engine.root_propagate().is_err() {
        return Enumeration { count: 0, complete: true, witnesses: Vec::new(), nodes: engine.nodes };
    }
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    let complete = engine
        .search(false, &mut |rel| {
            count += 1;
            if witnesses.len() < limit {
                witnesses.push(rel);
            }
        })
        .is_ok();
    Enumeration { count, complete, witnesses, nodes: engine.nodes }
}

/// Scans radii 1..=max_radius for the smallest Unsat window. Unsat is
/// monotone in the radius: larger balls contain all instances.
pub fn find_obstruction(
    spec: &crate::group::GroupSpec,
    class: AxiomClass,
    max_radius: u32,
    budget: u64,
    ball_cap: usize,
) -> Result<ObstructionReport, Error> {
    let mut results = Vec::new();
    for r in 1..=max_radius {
        let window = Arc::new(spec.ball(r, ball_cap)?);
        let cert = solve(&window, class, budget);
        let unsat = matches!(cert, Certificate::Unsat { .. });
        results.push((r, cert));
        if unsat {
            return Ok(ObstructionReport { results, found: Some(r) });
        }
    }
    Ok(ObstructionReport { results, found: None })
}

/// Reference enumerator: tries every assignment of pair states and keeps
/// the ones the axiom checker accepts. Independent of the solver's
/// propagation path; only usable on small windows.
pub fn brute_force_enumerate(window: &Arc<Window>, class: AxiomClass) -> Vec<WindowRelation> {
    let n = window.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    assert!(pairs.len() <= 16, "brute force limited to 16 pairs");
    let values: &[PairState] = if class.admits_unrelated() {
        &[PairState::Less, PairState::Greater, PairState::Unrelated]
    } else {
        &[PairState::Less, PairState::Greater]
    };
    let mut out = Vec::new();
    let total = values.len().pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut rel = WindowRelation::new_undecided(window.clone());
        for &(i, j) in &pairs {
            rel.set(i, j, values[code % values.len()]);
            code /= values.len();
        }
        if check_axioms(&rel, class).is_empty() {
            out.push(rel);
        }
    }
    out
}

/// Replays an Unsat trace against a fresh relation: every non-decision
/// step must follow from its axiom instance, and the final step must
/// clash with an already-decided entry.
pub fn replay_trace(window: &Arc<Window>, class: AxiomClass, trace: &[TraceStep]) -> Result<(), Error> {
    let spec = window.spec().clone();
    let mut rel = WindowRelation::new_undecided(window.clone());
    let idx = |e: &Elem| -> Result<usize, Error> {
        window
            .index_of(e)
            .ok_or_else(|| Error::Verify(format!("trace element {e} not in window")))
    };
    let fail = |msg: String| Err(Error::Verify(msg));

    if trace.is_empty() {
        return fail("empty trace".into());
    }
    for (step_no, step) in trace.iter().enumerate() {
        let is_last = step_no + 1 == trace.len();
        // check the instance premises against the relation built so far
        match step.axiom {
            "decision" => {}
            "transitivity" => {
                let [x, y, z] = &step.elements[..] else {
                    return fail("transitivity step needs 3 elements".into());
                };
                let (xi, yi, zi) = (idx(x)?, idx(y)?, idx(z)?);
                if rel.get(xi, yi) != PairState::Less || rel.get(yi, zi) != PairState::Less {
                    return fail(format!("step {step_no}: transitivity premises not established"));
                }
            }
            "left-invariance" | "right-invariance" => {
                let [z, x, y] = &step.elements[..] else {
                    return fail("invariance step needs 3 elements".into());
                };
                let (zi, xi, yi) = (idx(z)?, idx(x)?, idx(y)?);
                if rel.get(xi, yi) != PairState::Less {
                    return fail(format!("step {step_no}: invariance premise not established"));
                }
                let (tx, ty) = if step.axiom == "left-invariance" {
                    (
                        spec.multiply(window.elem(zi), window.elem(xi))?,
                        spec.multiply(window.elem(zi), window.elem(yi))?,
                    )
                } else {
                    (
                        spec.multiply(window.elem(xi), window.elem(zi))?,
                        spec.multiply(window.elem(yi), window.elem(zi))?,
                    )
                };
                let expect: Vec<(Elem, Elem, PairState)> = vec![(tx, ty, PairState::Less)];
                let got: Vec<(Elem, Elem, PairState)> = step
                    .forced
                    .iter()
                    .map(|(a, b, s)| {
                        if *s == PairState::Less {
                            (a.clone(), b.clone(), *s)
                        } else {
                            (b.clone(), a.clone(), s.flip())
                        }
                    })
                    .collect();
                if got != expect {
                    return fail(format!("step {step_no}: forced entry does not match instance"));
                }
            }
            "locally-invariant" => {
                let [x, y] = &step.elements[..] else {
                    return fail("locally-invariant step needs 2 elements".into());
                };
                let (xi, yi) = (idx(x)?, idx(y)?);
                let xy = spec.multiply(window.elem(xi), window.elem(yi))?;
                let xyi = spec.multiply(window.elem(xi), &spec.invert(window.elem(yi))?)?;
                // the forced entry must be one of the two disjuncts
                let ok = step.forced.iter().all(|(a, b, s)| {
                    let (lo, hi) = if *s == PairState::Less { (a, b) } else { (b, a) };
                    lo == window.elem(xi) && (*hi == xy || *hi == xyi)
                });
                if !ok {
                    return fail(format!("step {step_no}: forced entry is not a disjunct"));
                }
            }
            "conradian" => {
                let [x, y] = &step.elements[..] else {
                    return fail("conradian step needs 2 elements".into());
                };
                let (xi, yi) = (idx(x)?, idx(y)?);
                let e = idx(&spec.identity())?;
                if rel.get(e, xi) != PairState::Less || rel.get(e, yi) != PairState::Less {
                    return fail(format!("step {step_no}: conradian premises not established"));
                }
            }
            other => return fail(format!("unknown axiom `{other}` in trace")),
        }

        // apply forced entries; the final step must clash
        let mut clashed = step.forced.is_empty() && step.axiom == "conradian";
        for (a, b, s) in &step.forced {
            let (ai, bi) = (idx(a)?, idx(b)?);
            let cur = rel.get(ai, bi);
            if cur == PairState::Undecided {
                rel.set(ai, bi, *s);
            } else if cur != *s {
                clashed = true;
            }
        }
        if is_last && !clashed {
            return fail("final trace step does not produce a contradiction".into());
        }
        if clashed && !is_last {
            return fail(format!("step {step_no}: premature contradiction"));
        }
    }
    // replay only makes sense for the class's own axioms
    let _ = class;
    Ok(())
}
