//! Normalized-residual automaton for self-similar tails.
//!
//! A state is the next phase (prefix position or tail offset) together with
//! the residual still to be covered, measured in units of the current block
//! scale. Taking or skipping the phase's term moves to the next phase; after
//! the last tail offset the residual is divided by the ratio. Every path that
//! never leaves the feasible region `0 <= u <= R(phase)` sums to the target.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{Cardinality, CountError};
use crate::series::{Periodic, Rat, SeriesSpec, TailSpec};
use crate::topology::interval_filling_from;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// Next term is prefix entry `i` (0-based).
    Prefix(usize),
    /// Next term is tail coefficient `s` of the current block.
    Tail(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Open { phase: Phase, u: Rat },
    /// Residual zero: skip everything from here on.
    ZeroClosure,
    /// Residual equals the remaining mass: take everything from here on.
    FullClosure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub to: usize,
    pub take: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of expanded states.
    pub budget: usize,
    /// Maximum bit length of a residual's numerator or denominator.
    pub max_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { budget: 100_000, max_bits: 4096 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct StateGraph {
    pub nodes: Vec<Node>,
    /// Out-edges, take edge first.
    pub edges: Vec<Vec<Edge>>,
    /// `None` when the target has no representation.
    pub start: Option<usize>,
    /// States left unexpanded by the budget.
    pub frontier: Vec<usize>,
    /// Frontier states that certainly have a completion.
    pub certified: Vec<usize>,
    /// States expanded during construction.
    pub explored: usize,
    /// No state was left unexpanded.
    pub complete: bool,
}

impl StateGraph {
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// States with two out-edges whose heads both lead back to them. Quadratic;
    /// meant for checking the component-based classification.
    pub fn double_cycle_states(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| {
                let heads: Vec<usize> = self.edges[v].iter().map(|e| e.to).collect();
                heads.len() >= 2 && heads.iter().all(|&h| self.reaches(h, v))
            })
            .collect()
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(self.edges[v].iter().map(|e| e.to));
            }
        }
        false
    }
}

/// Transition structure of a series with a zero or self-similar tail.
#[derive(Clone, Debug)]
pub(crate) struct Machine {
    prefix: Vec<Rat>,
    /// `prefix_mass[i]` is the mass from prefix entry `i` on, tail included.
    prefix_mass: Vec<Rat>,
    per: Option<Periodic>,
    filling_from: Option<usize>,
}

impl Machine {
    pub fn new(spec: &SeriesSpec) -> Result<Self, CountError> {
        spec.validate()?;
        if let TailSpec::Blocks(_) = spec.tail {
            return Err(CountError::Unsupported("blocks tails have no finite automaton"));
        }
        let per = spec.periodic();
        let tail_total = per.as_ref().map_or_else(Rat::zero, |p| p.mass[0].clone());
        let mut prefix_mass = vec![tail_total; spec.prefix.len() + 1];
        for i in (0..spec.prefix.len()).rev() {
            prefix_mass[i] = &prefix_mass[i + 1] + &spec.prefix[i];
        }
        Ok(Machine {
            prefix: spec.prefix.clone(),
            prefix_mass,
            per,
            filling_from: interval_filling_from(spec),
        })
    }

    pub fn total(&self) -> &Rat {
        &self.prefix_mass[0]
    }

    pub fn first_phase(&self) -> Option<Phase> {
        if !self.prefix.is_empty() {
            Some(Phase::Prefix(0))
        } else {
            self.per.as_ref().map(|_| Phase::Tail(0))
        }
    }

    pub fn next(&self, phase: Phase) -> Option<Phase> {
        match phase {
            Phase::Prefix(i) if i + 1 < self.prefix.len() => Some(Phase::Prefix(i + 1)),
            Phase::Prefix(_) => self.per.as_ref().map(|_| Phase::Tail(0)),
            Phase::Tail(s) => Some(Phase::Tail((s + 1) % self.per.as_ref().expect("tail").period())),
        }
    }

    pub fn term(&self, phase: Phase) -> &Rat {
        match phase {
            Phase::Prefix(i) => &self.prefix[i],
            Phase::Tail(s) => &self.per.as_ref().expect("tail").coeffs[s],
        }
    }

    pub fn mass(&self, phase: Option<Phase>) -> Rat {
        match phase {
            None => Rat::zero(),
            Some(Phase::Prefix(i)) => self.prefix_mass[i].clone(),
            Some(Phase::Tail(s)) => self.per.as_ref().expect("tail").mass[s].clone(),
        }
    }

    fn classify_residual(&self, phase: Option<Phase>, v: Rat) -> Option<Node> {
        if v.is_negative() {
            return None;
        }
        if v.is_zero() {
            return Some(Node::ZeroClosure);
        }
        let r = self.mass(phase);
        match v.cmp(&r) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => Some(Node::FullClosure),
            std::cmp::Ordering::Less => Some(Node::Open { phase: phase.expect("positive mass"), u: v }),
        }
    }

    pub fn start(&self, t: &Rat) -> Result<Node, CountError> {
        if t.is_negative() || t > self.total() {
            return Err(CountError::TargetOutOfRange);
        }
        Ok(self.classify_residual(self.first_phase(), t.clone()).expect("target in range"))
    }

    /// Successor of an open state, `None` when infeasible.
    pub fn step(&self, phase: Phase, u: &Rat, take: bool) -> Option<Node> {
        let mut v = if take { u - self.term(phase) } else { u.clone() };
        if v.is_negative() {
            return None;
        }
        let next = self.next(phase);
        if let (Phase::Tail(s), Some(per)) = (phase, self.per.as_ref()) {
            if s + 1 == per.period() {
                v /= &per.q;
            }
        }
        self.classify_residual(next, v)
    }

    /// Every residual in `[0, R]` at this phase has a completion.
    pub fn certified(&self, phase: Phase) -> bool {
        let Some(n) = self.filling_from else { return false };
        match phase {
            Phase::Prefix(i) => i + 1 >= n,
            Phase::Tail(_) => true,
        }
    }
}

fn too_wide(u: &Rat, max_bits: u64) -> bool {
    u.numer().bits() > max_bits || u.denom().bits() > max_bits
}

/// Explores all states reachable from `t` and trims the dead ones.
pub fn build_graph(spec: &SeriesSpec, t: &Rat, limits: Limits) -> Result<StateGraph, CountError> {
    let machine = Machine::new(spec)?;
    let raw = explore(&machine, t, limits)?;
    let complete = raw.complete;
    let graph = trim(&raw);
    if complete {
        Ok(graph)
    } else {
        Err(CountError::BudgetExceeded { explored: raw.explored, partial: Box::new(graph) })
    }
}

pub(crate) fn explore(m: &Machine, t: &Rat, limits: Limits) -> Result<StateGraph, CountError> {
    let start = m.start(t)?;
    let mut g = StateGraph::default();
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut intern = |g: &mut StateGraph, node: Node, queue: &mut VecDeque<usize>| -> usize {
        if let Some(&id) = index.get(&node) {
            return id;
        }
        let id = g.nodes.len();
        index.insert(node.clone(), id);
        let self_loop = match node {
            Node::ZeroClosure => Some(false),
            Node::FullClosure => Some(true),
            Node::Open { .. } => {
                queue.push_back(id);
                None
            }
        };
        g.nodes.push(node);
        g.edges.push(self_loop.map(|take| Edge { to: id, take }).into_iter().collect());
        id
    };

    let s = intern(&mut g, start, &mut queue);
    g.start = Some(s);
    g.complete = true;
    while let Some(id) = queue.pop_front() {
        let Node::Open { phase, u } = g.nodes[id].clone() else { unreachable!() };
        if g.explored >= limits.budget || too_wide(&u, limits.max_bits) {
            g.complete = false;
            g.frontier.push(id);
            if m.certified(phase) {
                g.certified.push(id);
            }
            continue;
        }
        g.explored += 1;
        for take in [true, false] {
            if let Some(child) = m.step(phase, &u, take) {
                let c = intern(&mut g, child, &mut queue);
                g.edges[id].push(Edge { to: c, take });
            }
        }
    }
    Ok(g)
}

/// Removes states without an infinite continuation and renumbers the rest in
/// breadth-first order from the start.
pub(crate) fn trim(g: &StateGraph) -> StateGraph {
    let n = g.len();
    let mut keep_always = vec![false; n];
    for &c in &g.certified {
        keep_always[c] = true;
    }
    for (i, node) in g.nodes.iter().enumerate() {
        if !matches!(node, Node::Open { .. }) {
            keep_always[i] = true;
        }
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outdeg: Vec<usize> = vec![0; n];
    for (v, es) in g.edges.iter().enumerate() {
        outdeg[v] = es.len();
        for e in es {
            preds[e.to].push(v);
        }
    }
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| outdeg[v] == 0 && !keep_always[v]).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &p in &preds[v] {
            outdeg[p] -= 1;
            if outdeg[p] == 0 && !keep_always[p] && alive[p] {
                stack.push(p);
            }
        }
    }

    let mut out = StateGraph { explored: g.explored, complete: g.complete, ..StateGraph::default() };
    let Some(s) = g.start.filter(|&s| alive[s]) else { return out };
    let mut renum: HashMap<usize, usize> = HashMap::new();
    let mut order = vec![s];
    renum.insert(s, 0);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for e in &g.edges[v] {
            if alive[e.to] && !renum.contains_key(&e.to) {
                renum.insert(e.to, order.len());
                order.push(e.to);
            }
        }
    }
    for &v in &order {
        out.nodes.push(g.nodes[v].clone());
        out.edges.push(
            g.edges[v]
                .iter()
                .filter(|e| alive[e.to])
                .map(|e| Edge { to: renum[&e.to], take: e.take })
                .collect(),
        );
    }
    out.start = Some(0);
    out.frontier = g.frontier.iter().filter_map(|v| renum.get(v).copied()).collect();
    out.certified = g.certified.iter().filter_map(|v| renum.get(v).copied()).collect();
    out.complete = g.complete;
    out
}

/// Number of paths leaving each state, treating certified frontier states as
/// contributing one path each.
pub fn node_classes(g: &StateGraph) -> Vec<Cardinality> {
    let n = g.len();
    let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(n, n * 2);
    for _ in 0..n {
        pg.add_node(());
    }
    for (v, es) in g.edges.iter().enumerate() {
        for e in es {
            pg.add_edge(NodeIndex::new(v), NodeIndex::new(e.to), ());
        }
    }
    let certified: std::collections::HashSet<usize> = g.certified.iter().copied().collect();
    let sccs = tarjan_scc(&pg);
    let mut comp = vec![usize::MAX; n];
    for (ci, c) in sccs.iter().enumerate() {
        for v in c {
            comp[v.index()] = ci;
        }
    }
    let mut class = vec![Cardinality::Fin(0); sccs.len()];
    // Components come out sinks first.
    for (ci, c) in sccs.iter().enumerate() {
        let mut internal = 0usize;
        let mut exits = Cardinality::Fin(0);
        for v in c {
            for e in &g.edges[v.index()] {
                let cj = comp[e.to];
                if cj == ci {
                    internal += 1;
                } else {
                    debug_assert!(cj < ci, "successor component not yet classified");
                    exits = exits + class[cj];
                }
            }
        }
        class[ci] = if internal > c.len() {
            Cardinality::Continuum
        } else if internal > 0 {
            if exits == Cardinality::Fin(0) {
                Cardinality::Fin(1)
            } else {
                Cardinality::Omega + exits
            }
        } else if certified.contains(&c[0].index()) {
            Cardinality::Fin(1)
        } else {
            exits
        };
    }
    (0..n).map(|v| class[comp[v]]).collect()
}

/// Cardinality of the set of infinite paths from the start. Graphs cut short
/// by the budget yield lower bounds, except for a verified continuum.
pub fn classify_paths(g: &StateGraph) -> Cardinality {
    let Some(s) = g.start else { return Cardinality::Fin(0) };
    let c = node_classes(g)[s];
    if g.is_complete() {
        return c;
    }
    match c {
        Cardinality::Continuum => Cardinality::Continuum,
        Cardinality::Omega => Cardinality::AtLeast(2),
        Cardinality::Fin(k) | Cardinality::AtLeast(k) => Cardinality::AtLeast(k),
    }
}
