use num_traits::Zero;

use crate::instance::Variant;
use crate::lp::LpSolution;
use crate::num::{approx6, fmt_rat, to_f64, Rat};

/// A ratio `a / b` that stays meaningful when `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Usage {
    Ratio(Rat),
    /// `0 / 0`: nothing used where nothing was paid.
    Idle,
    /// Positive cost against a zero LP component.
    Unbounded,
}

impl Usage {
    pub fn of(value: &Rat, base: &Rat) -> Usage {
        if !base.is_zero() {
            Usage::Ratio(value / base)
        } else if value.is_zero() {
            Usage::Idle
        } else {
            Usage::Unbounded
        }
    }

    pub fn approx(&self) -> String {
        match self {
            Usage::Ratio(r) => approx6(r),
            Usage::Idle => String::new(),
            Usage::Unbounded => "inf".into(),
        }
    }

    pub fn exact(&self) -> String {
        match self {
            Usage::Ratio(r) => fmt_rat(r),
            Usage::Idle => String::new(),
            Usage::Unbounded => "inf".into(),
        }
    }

    pub fn ratio(&self) -> Option<&Rat> {
        match self {
            Usage::Ratio(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RatioRow {
    pub seed: u64,
    pub variant: Variant,
    pub n: usize,
    pub horizon: usize,
    pub num_demands: usize,
    pub lp: LpSolution,
    pub rounded_total: Rat,
    pub f_used: Usage,
    pub r_used: Usage,
    pub h_used: Usage,
    pub oracle_opt: Option<Rat>,
    pub ratio_vs_lp: Usage,
    pub ratio_vs_opt: Option<Usage>,
    /// Named invariant checks, in evaluation order.
    pub checks: Vec<(&'static str, bool)>,
}

impl RatioRow {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect()
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| *n == name).map(|(_, ok)| *ok)
    }
}

pub const CSV_COLUMNS: [&str; 20] = [
    "seed",
    "variant",
    "n",
    "T",
    "num_demands",
    "lp_obj",
    "f_lp",
    "r_lp",
    "h_lp",
    "rounded_total",
    "f_used_factor",
    "r_used_factor",
    "h_used_factor",
    "oracle_opt",
    "ratio_vs_lp",
    "ratio_vs_opt",
    "pass",
    "ratio_vs_lp_exact",
    "ratio_vs_opt_exact",
    "failed_checks",
];

#[derive(Debug, Clone, Default)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn new(rows: Vec<RatioRow>) -> Self {
        RatioReport { rows }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(RatioRow::pass)
    }

    pub fn max_ratio_vs_lp(&self) -> Option<Rat> {
        self.rows.iter().filter_map(|r| r.ratio_vs_lp.ratio()).max().cloned()
    }

    pub fn mean_ratio_vs_lp(&self) -> Option<Rat> {
        mean(self.rows.iter().filter_map(|r| r.ratio_vs_lp.ratio()))
    }

    pub fn max_ratio_vs_opt(&self) -> Option<Rat> {
        self.rows
            .iter()
            .filter_map(|r| r.ratio_vs_opt.as_ref().and_then(Usage::ratio))
            .max()
            .cloned()
    }

    pub fn mean_ratio_vs_opt(&self) -> Option<Rat> {
        mean(self.rows.iter().filter_map(|r| r.ratio_vs_opt.as_ref().and_then(Usage::ratio)))
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.seed.to_string(),
                r.variant.to_string(),
                r.n.to_string(),
                r.horizon.to_string(),
                r.num_demands.to_string(),
                fmt_rat(&r.lp.objective),
                fmt_rat(&r.lp.facility_cost),
                fmt_rat(&r.lp.routing_cost),
                fmt_rat(&r.lp.holding_cost),
                fmt_rat(&r.rounded_total),
                r.f_used.approx(),
                r.r_used.approx(),
                r.h_used.approx(),
                r.oracle_opt.as_ref().map(fmt_rat).unwrap_or_default(),
                r.ratio_vs_lp.approx(),
                r.ratio_vs_opt.as_ref().map(Usage::approx).unwrap_or_default(),
                r.pass().to_string(),
                r.ratio_vs_lp.exact(),
                r.ratio_vs_opt.as_ref().map(Usage::exact).unwrap_or_default(),
                r.failed_checks().join(";"),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// One-line aggregate summary.
    pub fn summary(&self) -> String {
        let show = |r: Option<Rat>| r.map(|x| format!("{:.6}", to_f64(&x))).unwrap_or_else(|| "-".into());
        format!(
            "{} instances, {} failing; ratio vs LP max {} mean {}; ratio vs OPT max {} mean {}",
            self.rows.len(),
            self.rows.iter().filter(|r| !r.pass()).count(),
            show(self.max_ratio_vs_lp()),
            show(self.mean_ratio_vs_lp()),
            show(self.max_ratio_vs_opt()),
            show(self.mean_ratio_vs_opt()),
        )
    }
}

fn mean<'a>(values: impl Iterator<Item = &'a Rat>) -> Option<Rat> {
    let (sum, count) = values.fold((Rat::zero(), 0i64), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / Rat::from_integer(count.into()))
}
