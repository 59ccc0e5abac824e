//! Depth-first branch and bound over per-task choices.
//!
//! Tasks are branched in key order, choices in the order FEC, NEC, REJECT.
//! The bound is the cardinality bound `accepted + remaining`. A subtree is cut
//! unless it can strictly beat the incumbent, so the first optimum reached is
//! also the lexicographically first one.

use super::{Item, Problem, Usage};
use crate::model::{Decision, Target};

struct Search<'a> {
    problem: &'a Problem,
    usage: Usage,
    current: Vec<Decision>,
    best: Option<(usize, Vec<Decision>)>,
}

impl Search<'_> {
    fn visit(&mut self, depth: usize, accepted: usize) {
        let remaining = self.problem.len() - depth;
        if let Some((best, _)) = &self.best {
            if accepted + remaining <= *best {
                return;
            }
        }
        if depth == self.problem.len() {
            self.best = Some((accepted, self.current.clone()));
            return;
        }

        let item: Item = self.problem.items[depth];
        for target in [Target::Fec, Target::Nec] {
            if !item.admissible(target) || !self.usage.fits(self.problem, &item, target) {
                continue;
            }
            // Restore by copy: subtracting floats back out is not exact.
            let saved = match target {
                Target::Fec => (self.usage.fec, self.usage.fronthaul[item.cell]),
                Target::Nec => (self.usage.nec[item.cell], 0.0),
            };
            self.usage.add(&item, target);
            self.current[depth] = target.into();
            self.visit(depth + 1, accepted + 1);
            match target {
                Target::Fec => {
                    self.usage.fec = saved.0;
                    self.usage.fronthaul[item.cell] = saved.1;
                }
                Target::Nec => self.usage.nec[item.cell] = saved.0,
            }
            if self.is_perfect() {
                return;
            }
        }

        self.current[depth] = Decision::Reject;
        self.visit(depth + 1, accepted);
    }

    fn is_perfect(&self) -> bool {
        matches!(&self.best, Some((best, _)) if *best == self.problem.len())
    }
}

pub(super) fn search(problem: &Problem) -> Vec<Decision> {
    let mut search = Search {
        problem,
        usage: Usage::empty(problem),
        current: vec![Decision::Reject; problem.len()],
        best: None,
    };
    search.visit(0, 0);
    search
        .best
        .map(|(_, decisions)| decisions)
        .unwrap_or_else(|| vec![Decision::Reject; problem.len()])
}
