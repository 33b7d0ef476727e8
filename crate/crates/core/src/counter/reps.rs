//! Representations (subsets achieving a target) and their enumeration as
//! eventually periodic paths of the state graph.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use super::graph::{Edge, Node, StateGraph};
use crate::series::{pow, Rat, SeriesSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TailAction {
    None,
    /// Every index from here on is taken.
    AllFrom(usize),
    /// Decisions from `start` on repeat `word` (true = take).
    Cycle { start: usize, word: Vec<bool> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    /// Taken indices before the tail action starts.
    pub support: BTreeSet<usize>,
    pub tail: TailAction,
}

impl Representation {
    pub fn finite(support: impl IntoIterator<Item = usize>) -> Self {
        Representation { support: support.into_iter().collect(), tail: TailAction::None }
    }

    pub fn all_from(support: impl IntoIterator<Item = usize>, n: usize) -> Self {
        Representation { support: support.into_iter().collect(), tail: TailAction::AllFrom(n) }
    }

    pub fn is_infinite(&self) -> bool {
        self.tail != TailAction::None
    }

    /// Whether index `n` belongs to the set.
    pub fn contains(&self, n: usize) -> bool {
        match &self.tail {
            TailAction::AllFrom(m) if n >= *m => true,
            TailAction::Cycle { start, word } if n >= *start => word[(n - start) % word.len()],
            _ => self.support.contains(&n),
        }
    }

    /// First index after which the decisions are periodic, and the period.
    fn shape(&self) -> (usize, usize) {
        let pre = self.support.iter().next_back().map_or(1, |m| m + 1);
        match &self.tail {
            TailAction::None => (pre, 1),
            TailAction::AllFrom(n) => (pre.max(*n), 1),
            TailAction::Cycle { start, word } => (pre.max(*start), word.len()),
        }
    }

    /// Order by decision sequence with "take" before "skip".
    pub fn cmp_decisions(&self, other: &Self) -> Ordering {
        let (a, p) = self.shape();
        let (b, q) = other.shape();
        let horizon = a.max(b) + p * q;
        for n in 1..=horizon {
            match (self.contains(n), other.contains(n)) {
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
        }
        Ordering::Equal
    }

    /// Exact sum over the series, when expressible in closed form.
    pub fn sum(&self, spec: &SeriesSpec) -> Option<Rat> {
        let mut acc: Rat = self.support.iter().map(|&n| spec.term(n)).sum();
        match &self.tail {
            TailAction::None => {}
            TailAction::AllFrom(n) => acc += spec.remainder(n - 1).exact()?.clone(),
            TailAction::Cycle { start, word } => {
                let per = spec.periodic()?;
                let p = per.period();
                if *start <= spec.prefix.len() || word.len() % p != 0 {
                    return None;
                }
                let block: Rat = word
                    .iter()
                    .enumerate()
                    .filter(|(_, &t)| t)
                    .map(|(i, _)| spec.term(start + i))
                    .sum();
                let ratio = pow(&per.q, (word.len() / p) as u64);
                acc += block / (Rat::one() - ratio);
            }
        }
        Some(acc)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.support.iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))?;
        match &self.tail {
            TailAction::None => Ok(()),
            TailAction::AllFrom(n) => write!(f, "+all({n}..)"),
            TailAction::Cycle { start, word } => {
                let w: String = word.iter().map(|&t| if t { '1' } else { '0' }).collect();
                write!(f, "+cycle({start}..;{w})")
            }
        }
    }
}

/// Walk prefix, then either a closure or a return to an earlier position.
fn decode(walk: &[(usize, Edge)], end: End) -> Representation {
    let takes = |r: std::ops::Range<usize>| -> BTreeSet<usize> {
        r.filter(|&j| walk[j].1.take).map(|j| j + 1).collect()
    };
    match end {
        End::Zero => Representation { support: takes(0..walk.len()), tail: TailAction::None },
        End::Full => Representation { support: takes(0..walk.len()), tail: TailAction::AllFrom(walk.len() + 1) },
        End::Loop(i) => Representation {
            support: takes(0..i),
            tail: TailAction::Cycle { start: i + 1, word: walk[i..].iter().map(|(_, e)| e.take).collect() },
        },
    }
}

#[derive(Clone, Copy)]
enum End {
    Zero,
    Full,
    Loop(usize),
}

fn primitive(word: &[(usize, Edge)]) -> bool {
    let l = word.len();
    (1..l).filter(|d| l.is_multiple_of(*d)).all(|d| (0..l).any(|k| word[k] != word[k % d]))
}

/// Upper bound on DFS steps per enumeration.
const MAX_STEPS: usize = 2_000_000;

struct Search<'a> {
    g: &'a StateGraph,
    bound: usize,
    steps: usize,
    found: Vec<Representation>,
    lengths: Vec<usize>,
}

impl Search<'_> {
    /// Every canonical lasso whose walk has at most `bound` edges.
    fn run(&mut self) {
        let g = self.g;
        let Some(s) = g.start else { return };
        let mut walk: Vec<(usize, Edge)> = Vec::new();
        let mut pos: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
        // Frames: (node, next out-edge to try).
        let mut stack: Vec<(usize, usize)> = Vec::new();
        if self.visit(s, &walk, &pos) {
            pos[s].push(0);
            stack.push((s, 0));
        }
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return;
            }
            let edges = &g.edges[v];
            if *k >= edges.len() || walk.len() >= self.bound {
                stack.pop();
                pos[v].pop();
                walk.pop();
                continue;
            }
            let e = edges[*k];
            *k += 1;
            walk.push((v, e));
            if self.visit(e.to, &walk, &pos) {
                pos[e.to].push(walk.len());
                stack.push((e.to, 0));
            } else {
                walk.pop();
            }
        }
    }

    /// Records representations ending at `v`; returns whether to extend.
    fn visit(&mut self, v: usize, walk: &[(usize, Edge)], pos: &[Vec<usize>]) -> bool {
        match self.g.nodes[v] {
            Node::ZeroClosure => {
                self.emit(decode(walk, End::Zero), walk.len());
                false
            }
            Node::FullClosure => {
                self.emit(decode(walk, End::Full), walk.len());
                false
            }
            Node::Open { .. } => {
                let n = walk.len();
                for &i in &pos[v] {
                    let minimal = i == 0 || walk[i - 1] != walk[n - 1];
                    if minimal && primitive(&walk[i..]) {
                        self.emit(decode(walk, End::Loop(i)), n);
                    }
                }
                true
            }
        }
    }

    fn emit(&mut self, r: Representation, len: usize) {
        self.found.push(r);
        self.lengths.push(len);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub reps: Vec<Representation>,
    /// More representations exist than were listed.
    pub truncated: bool,
}

/// Up to `limit` canonical representations in take-first decision order.
///
/// With finitely many paths all of them are generated and the least are
/// kept. Otherwise the shortest lassos are collected by iterative deepening
/// and then sorted.
pub fn enumerate_graph(g: &StateGraph, finite: bool, limit: usize) -> Enumeration {
    if g.start.is_none() || limit == 0 {
        return Enumeration { reps: Vec::new(), truncated: g.start.is_some() };
    }
    let mut bound = if finite { g.len() + 1 } else { 8 };
    loop {
        let mut s = Search { g, bound, steps: 0, found: Vec::new(), lengths: Vec::new() };
        s.run();
        let capped = s.steps > MAX_STEPS;
        let enough = finite || s.found.len() >= limit || capped || bound > 4 * g.len() + 64;
        if enough {
            let mut idx: Vec<usize> = (0..s.found.len()).collect();
            if !finite {
                idx.sort_by(|&a, &b| {
                    s.lengths[a].cmp(&s.lengths[b]).then_with(|| s.found[a].cmp_decisions(&s.found[b]))
                });
            } else {
                idx.sort_by(|&a, &b| s.found[a].cmp_decisions(&s.found[b]));
            }
            let truncated = !finite || capped || idx.len() > limit;
            idx.truncate(limit);
            let mut reps: Vec<Representation> = idx.into_iter().map(|i| s.found[i].clone()).collect();
            reps.sort_by(|a, b| a.cmp_decisions(b));
            return Enumeration { reps, truncated };
        }
        bound *= 2;
    }
}

/// First infinite representation found by deepening, if any.
pub(crate) fn first_infinite(g: &StateGraph) -> Option<Representation> {
    let mut bound = 8;
    while bound <= 4 * g.len() + 64 {
        let mut s = Search { g, bound, steps: 0, found: Vec::new(), lengths: Vec::new() };
        s.run();
        let mut inf: Vec<(usize, Representation)> =
            s.found.into_iter().zip(s.lengths).filter(|(r, _)| r.is_infinite()).map(|(r, l)| (l, r)).collect();
        inf.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp_decisions(&b.1)));
        if let Some((_, r)) = inf.into_iter().next() {
            return Some(r);
        }
        if s.steps > MAX_STEPS {
            return None;
        }
        bound *= 2;
    }
    None
}

/// Checks that a representation's closed-form sum equals `t`.
pub fn verify(spec: &SeriesSpec, r: &Representation, t: &Rat) -> bool {
    r.sum(spec).is_some_and(|s| &s == t)
}
