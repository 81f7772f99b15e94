use std::fmt;

use num_traits::{Signed, Zero};

use super::{IapInstance, Instance};
use crate::num::{fmt_rat, Rat};

/// One violated modelling assumption. An empty list means the input is valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyHorizon,
    DimensionMismatch(String),
    NegativeWeight { u: usize, v: usize },
    AsymmetricWeight { u: usize, v: usize },
    NonzeroDiagonal { v: usize },
    TriangleInequality { u: usize, v: usize, via: usize },
    NegativeFacilityCost { v: usize },
    NegativeDistance,
    VertexOutOfRange { v: usize, t: usize },
    DayOutOfRange { v: usize, t: usize },
    DuplicateDemand { v: usize, t: usize },
    NonPositiveDemand { v: usize, t: usize },
    HoldingShape { v: usize, t: usize },
    NegativeHolding { v: usize, s: usize, t: usize },
    HoldingNotMonotone { v: usize, s: usize, t: usize },
    MissingCapacity,
    NonPositiveCapacity,
    DemandExceedsCapacity { v: usize, t: usize, amount: Rat, capacity: Rat },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyHorizon => write!(f, "horizon T must be at least 1"),
            DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            NegativeWeight { u, v } => write!(f, "negative weight w({u},{v})"),
            AsymmetricWeight { u, v } => write!(f, "weights not symmetric at ({u},{v})"),
            NonzeroDiagonal { v } => write!(f, "w({v},{v}) is not zero"),
            TriangleInequality { u, v, via } => {
                write!(f, "triangle inequality fails: w({u},{v}) > w({u},{via}) + w({via},{v})")
            }
            NegativeFacilityCost { v } => write!(f, "negative facility cost at {v}"),
            NegativeDistance => write!(f, "negative depot-client distance"),
            VertexOutOfRange { v, t } => write!(f, "demand ({v},{t}) names an unknown vertex"),
            DayOutOfRange { v, t } => write!(f, "demand ({v},{t}) lies outside the horizon"),
            DuplicateDemand { v, t } => write!(f, "duplicate demand point ({v},{t})"),
            NonPositiveDemand { v, t } => write!(f, "demand at ({v},{t}) is not positive"),
            HoldingShape { v, t } => {
                write!(f, "holding costs for ({v},{t}) must cover days 1..={t}")
            }
            NegativeHolding { v, s, t } => write!(f, "negative holding cost at ({v},{s},{t})"),
            HoldingNotMonotone { v, s, t } => write!(f, "holding not monotone at ({v},{s},{t})"),
            MissingCapacity => write!(f, "capacitated variant without a capacity"),
            NonPositiveCapacity => write!(f, "capacity must be positive"),
            DemandExceedsCapacity {
                v,
                t,
                amount,
                capacity,
            } => write!(
                f,
                "demand exceeds capacity at ({v},{t}): {} > {}",
                fmt_rat(amount),
                fmt_rat(capacity)
            ),
        }
    }
}

fn check_holding(v: usize, t: usize, holding: &[Rat], out: &mut Vec<Violation>) {
    if holding.len() != t {
        out.push(Violation::HoldingShape { v, t });
        return;
    }
    for (i, h) in holding.iter().enumerate() {
        if h.is_negative() {
            out.push(Violation::NegativeHolding { v, s: i + 1, t });
        }
    }
    for s in 2..=t {
        if holding[s - 2] < holding[s - 1] {
            out.push(Violation::HoldingNotMonotone { v, s, t });
        }
    }
}

fn check_capacity(
    capacitated: bool,
    capacity: Option<&Rat>,
    amounts: impl Iterator<Item = (usize, usize, Rat)>,
    out: &mut Vec<Violation>,
) {
    if let Some(u) = capacity {
        if !u.is_positive() {
            out.push(Violation::NonPositiveCapacity);
            return;
        }
    }
    if !capacitated {
        return;
    }
    let Some(cap) = capacity else {
        out.push(Violation::MissingCapacity);
        return;
    };
    for (v, t, amount) in amounts {
        if &amount > cap {
            out.push(Violation::DemandExceedsCapacity {
                v,
                t,
                amount,
                capacity: cap.clone(),
            });
        }
    }
}

pub(super) fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.n;
    if inst.horizon == 0 {
        out.push(Violation::EmptyHorizon);
    }
    if inst.facility_costs.len() != n {
        out.push(Violation::DimensionMismatch(format!(
            "{} facility costs for {n} vertices",
            inst.facility_costs.len()
        )));
    }
    if inst.weights.len() != n || inst.weights.iter().any(|row| row.len() != n) {
        out.push(Violation::DimensionMismatch(format!("weights must be {n}x{n}")));
        return out;
    }
    for u in 0..n {
        if !inst.weights[u][u].is_zero() {
            out.push(Violation::NonzeroDiagonal { v: u });
        }
        for v in 0..n {
            let w = &inst.weights[u][v];
            if w.is_negative() {
                out.push(Violation::NegativeWeight { u, v });
            }
            if u < v && w != &inst.weights[v][u] {
                out.push(Violation::AsymmetricWeight { u, v });
            }
        }
    }
    'metric: for u in 0..n {
        for v in 0..n {
            for via in 0..n {
                if inst.weights[u][v] > &inst.weights[u][via] + &inst.weights[via][v] {
                    out.push(Violation::TriangleInequality { u, v, via });
                    break 'metric;
                }
            }
        }
    }
    for (v, f) in inst.facility_costs.iter().enumerate() {
        if f.is_negative() {
            out.push(Violation::NegativeFacilityCost { v });
        }
    }
    let mut previous: Option<(usize, usize)> = None;
    for d in &inst.demands {
        let (v, t) = (d.vertex, d.day);
        if v >= n {
            out.push(Violation::VertexOutOfRange { v, t });
        }
        if t == 0 || t > inst.horizon {
            out.push(Violation::DayOutOfRange { v, t });
            continue;
        }
        if previous == Some((v, t)) {
            out.push(Violation::DuplicateDemand { v, t });
        }
        previous = Some((v, t));
        if !d.amount.is_positive() {
            out.push(Violation::NonPositiveDemand { v, t });
        }
        check_holding(v, t, &d.holding, &mut out);
    }
    check_capacity(
        inst.variant.is_capacitated(),
        inst.capacity.as_ref(),
        inst.demands
            .iter()
            .map(|d| (d.vertex, d.day, d.amount.clone())),
        &mut out,
    );
    out
}

pub(super) fn validate_iap(iap: &IapInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let client = super::IAP_CLIENT;
    if iap.horizon == 0 {
        out.push(Violation::EmptyHorizon);
    }
    if iap.distance.is_negative() {
        out.push(Violation::NegativeDistance);
    }
    if iap.holding.len() != iap.horizon {
        out.push(Violation::DimensionMismatch(format!(
            "holding table has {} deadlines, horizon is {}",
            iap.holding.len(),
            iap.horizon
        )));
    } else {
        for (i, row) in iap.holding.iter().enumerate() {
            check_holding(client, i + 1, row, &mut out);
        }
    }
    for d in &iap.demands {
        if d.day == 0 || d.day > iap.horizon {
            out.push(Violation::DayOutOfRange { v: client, t: d.day });
        }
        if !d.amount.is_positive() {
            out.push(Violation::NonPositiveDemand { v: client, t: d.day });
        }
    }
    check_capacity(
        iap.variant.is_capacitated(),
        iap.capacity.as_ref(),
        iap.demands.iter().map(|d| (client, d.day, d.amount.clone())),
        &mut out,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{DemandPoint, Variant};
    use crate::num::int;

    fn single(holding: Vec<i64>, amount: i64, variant: Variant, cap: Option<i64>) -> Instance {
        let t = holding.len();
        Instance::new(
            t,
            variant,
            cap.map(int),
            vec![vec![int(0)]],
            vec![int(1)],
            vec![DemandPoint {
                vertex: 0,
                day: t,
                amount: int(amount),
                holding: holding.into_iter().map(int).collect(),
            }],
        )
    }

    #[test]
    fn reports_non_monotone_holding() {
        let inst = single(vec![1, 2, 0], 1, Variant::Uncap, None);
        let report = inst.validate();
        assert_eq!(report, vec![Violation::HoldingNotMonotone { v: 0, s: 2, t: 3 }]);
        assert_eq!(report[0].to_string(), "holding not monotone at (0,2,3)");
    }

    #[test]
    fn clean_instance_has_empty_report() {
        let inst = single(vec![2, 1, 0], 3, Variant::Uncap, None);
        assert!(inst.validate().is_empty());
    }

    #[test]
    fn reports_demand_above_capacity() {
        let inst = single(vec![0], 7, Variant::CapSplit, Some(5));
        let report = inst.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].to_string().starts_with("demand exceeds capacity"));
    }

    #[test]
    fn capacitated_without_capacity() {
        let inst = single(vec![0], 1, Variant::CapUnsplit, None);
        assert_eq!(inst.validate(), vec![Violation::MissingCapacity]);
    }

    #[test]
    fn flags_non_metric_weights() {
        let w = |a: i64, b: i64, c: i64| {
            vec![
                vec![int(0), int(a), int(b)],
                vec![int(a), int(0), int(c)],
                vec![int(b), int(c), int(0)],
            ]
        };
        let mk = |weights| Instance::new(1, Variant::Uncap, None, weights, vec![int(0); 3], vec![]);
        assert!(mk(w(1, 2, 1)).validate().is_empty());
        assert!(matches!(
            mk(w(1, 5, 1)).validate()[0],
            Violation::TriangleInequality { .. }
        ));
        let mut asym = w(1, 2, 1);
        asym[0][1] = int(2);
        assert!(mk(asym)
            .validate()
            .contains(&Violation::AsymmetricWeight { u: 0, v: 1 }));
    }
}
