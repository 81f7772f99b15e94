//! Dense two-phase tableau simplex over exact rationals.
//!
//! Rows are normalised so that a slack column can start in the basis whenever
//! possible; artificial columns are only added for rows that need them. Pivots
//! skip zero entries of the pivot row and column, which keeps the dense
//! tableau cheap on the sparse relaxations built in this crate.

use num_traits::{One, Signed, Zero};

use super::{LpError, LpModel, LpSolution, Relation};
use crate::num::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Smallest-index entering column and smallest-index leaving basic
    /// variable among ratio ties. Never cycles.
    #[default]
    Bland,
    /// Most negative reduced cost. May cycle on degenerate problems.
    Dantzig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub rule: PivotRule,
    pub max_pivots: Option<usize>,
}

pub fn solve_lp(model: &LpModel) -> Result<LpSolution, LpError> {
    solve_lp_with(model, SolveOptions::default())
}

pub fn solve_lp_with(model: &LpModel, options: SolveOptions) -> Result<LpSolution, LpError> {
    let x = Tableau::solve(model, options)?;
    verify(model, &x)?;
    Ok(LpSolution::from_model(model, x))
}

fn verify(model: &LpModel, x: &[Rat]) -> Result<(), LpError> {
    if let Some(j) = x.iter().position(|v| v.is_negative()) {
        return Err(LpError::Verification(format!("column {j} is negative")));
    }
    for (i, c) in model.constraints().iter().enumerate() {
        if !c.holds(x) {
            return Err(LpError::Verification(format!(
                "row {i} ({}) is violated",
                c.family.label()
            )));
        }
    }
    Ok(())
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    reduced: Vec<Rat>,
    neg_objective: Rat,
    enterable: Vec<bool>,
    pivots: usize,
    options: SolveOptions,
}

impl Tableau {
    fn solve(model: &LpModel, options: SolveOptions) -> Result<Vec<Rat>, LpError> {
        let n = model.num_vars();
        let cons = model.constraints();

        // Orientation per row: (negate?, needs surplus+artificial?, is equality?)
        let mut plan = Vec::with_capacity(cons.len());
        let mut n_slack = 0;
        let mut n_art = 0;
        for c in cons {
            let (negate, artificial, slack) = match c.relation {
                Relation::Le if !c.rhs.is_negative() => (false, false, true),
                Relation::Le => (true, true, true),
                Relation::Ge if !c.rhs.is_positive() => (true, false, true),
                Relation::Ge => (false, true, true),
                Relation::Eq => (c.rhs.is_negative(), true, false),
            };
            n_slack += slack as usize;
            n_art += artificial as usize;
            plan.push((negate, artificial, slack));
        }
        let ncols = n + n_slack + n_art;
        let art_start = n + n_slack;

        let mut rows = Vec::with_capacity(cons.len());
        let mut rhs = Vec::with_capacity(cons.len());
        let mut basis = Vec::with_capacity(cons.len());
        let (mut next_slack, mut next_art) = (n, art_start);
        for (c, &(negate, artificial, slack)) in cons.iter().zip(&plan) {
            let sign = if negate { -Rat::one() } else { Rat::one() };
            let mut row = vec![Rat::zero(); ncols];
            for (j, a) in &c.terms {
                row[*j] += a * &sign;
            }
            // After orientation, Le rows get +1 slack, Ge rows -1 surplus.
            let oriented_ge = match c.relation {
                Relation::Ge => !negate,
                Relation::Le => negate,
                Relation::Eq => false,
            };
            if slack {
                row[next_slack] = if oriented_ge { -Rat::one() } else { Rat::one() };
                if !artificial {
                    basis.push(next_slack);
                }
                next_slack += 1;
            }
            if artificial {
                row[next_art] = Rat::one();
                basis.push(next_art);
                next_art += 1;
            }
            rhs.push(&c.rhs * &sign);
            rows.push(row);
        }

        let mut tab = Tableau {
            rows,
            rhs,
            basis,
            reduced: Vec::new(),
            neg_objective: Rat::zero(),
            enterable: vec![true; ncols],
            pivots: 0,
            options,
        };

        if n_art > 0 {
            let mut phase_one = vec![Rat::zero(); ncols];
            for c in &mut phase_one[art_start..] {
                *c = Rat::one();
            }
            tab.price(&phase_one);
            tab.run()?;
            if !tab.neg_objective.is_zero() {
                return Err(LpError::Infeasible);
            }
            tab.drive_out_artificials(art_start);
            for e in &mut tab.enterable[art_start..] {
                *e = false;
            }
        }

        let mut cost = vec![Rat::zero(); ncols];
        cost[..n].clone_from_slice(model.objective());
        tab.price(&cost);
        tab.run()?;

        let mut x = vec![Rat::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.rhs[i].clone();
            }
        }
        Ok(x)
    }

    /// Recomputes the reduced-cost row for `cost` under the current basis.
    fn price(&mut self, cost: &[Rat]) {
        let mut reduced = cost.to_vec();
        let mut neg_objective = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *r -= cb * a;
                }
            }
            neg_objective -= cb * &self.rhs[i];
        }
        self.reduced = reduced;
        self.neg_objective = neg_objective;
    }

    fn entering(&self) -> Option<usize> {
        let candidates = self
            .reduced
            .iter()
            .enumerate()
            .filter(|(j, r)| self.enterable[*j] && r.is_negative());
        match self.options.rule {
            PivotRule::Bland => candidates.map(|(j, _)| j).next(),
            PivotRule::Dantzig => candidates
                .fold(None::<(usize, &Rat)>, |best, (j, r)| match best {
                    Some((_, b)) if b <= r => best,
                    _ => Some((j, r)),
                })
                .map(|(j, _)| j),
        }
    }

    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best: Option<(usize, Rat)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let a = &row[q];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self) -> Result<(), LpError> {
        while let Some(q) = self.entering() {
            let r = self.leaving(q).ok_or(LpError::Unbounded)?;
            self.pivot(r, q);
            if let Some(limit) = self.options.max_pivots {
                if self.pivots >= limit {
                    return Err(LpError::PivotLimit(limit));
                }
            }
        }
        Ok(())
    }

    fn pivot(&mut self, r: usize, q: usize) {
        self.pivots += 1;
        let mut prow = std::mem::take(&mut self.rows[r]);
        let piv = prow[q].clone();
        if !piv.is_one() {
            for a in prow.iter_mut().filter(|a| !a.is_zero()) {
                *a /= &piv;
            }
            self.rhs[r] /= &piv;
        }
        let nz: Vec<usize> = prow
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, _)| j)
            .collect();
        let prhs = self.rhs[r].clone();

        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.reduced[q].is_zero() {
            let f = self.reduced[q].clone();
            for &j in &nz {
                self.reduced[j] -= &f * &prow[j];
            }
            self.neg_objective -= &f * &prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = q;
    }

    /// Pivots basic artificials (all at level zero after a feasible phase one)
    /// onto structural or slack columns; rows with no such column are
    /// redundant and removed.
    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut redundant = Vec::new();
        for r in 0..self.rows.len() {
            if self.basis[r] < art_start {
                continue;
            }
            match (0..art_start).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => self.pivot(r, j),
                None => redundant.push(r),
            }
        }
        for &r in redundant.iter().rev() {
            self.rows.remove(r);
            self.rhs.remove(r);
            self.basis.remove(r);
        }
    }
}
