//! JSON document format. Rationals are written as lowest-terms strings
//! (`"3/2"`, `"7"`); integers are also accepted on input, floats are not.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DemandPoint, IapDemand, IapInstance, Instance, Problem, Variant};
use crate::num::{fmt_rat, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field {
        field: field.into(),
        message: message.into(),
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RatText {
    Text(String),
    Int(i64),
}

impl RatText {
    fn of(value: &Rat) -> Self {
        RatText::Text(fmt_rat(value))
    }

    fn value(&self, field: &str) -> Result<Rat, ParseError> {
        match self {
            RatText::Int(i) => Ok(Rat::from_integer((*i).into())),
            RatText::Text(s) => crate::num::parse_rat(s)
                .ok_or_else(|| field_err(field, format!("`{s}` is not a rational"))),
        }
    }

    fn nonnegative(&self, field: &str) -> Result<Rat, ParseError> {
        let v = self.value(field)?;
        if v.is_negative() {
            return Err(field_err(field, format!("negative value {}", fmt_rat(&v))));
        }
        Ok(v)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    #[serde(rename = "T")]
    horizon: usize,
    variant: Variant,
    capacity: Option<RatText>,
    weights: Vec<Vec<RatText>>,
    facility_costs: Vec<RatText>,
    demands: Vec<DemandDoc>,
    holding: Vec<HoldingDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DemandDoc {
    v: usize,
    t: usize,
    d: RatText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HoldingDoc {
    v: usize,
    s: usize,
    t: usize,
    h: RatText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IapDoc {
    #[serde(rename = "T")]
    horizon: usize,
    variant: Variant,
    capacity: Option<RatText>,
    distance: RatText,
    demands: Vec<IapDemandDoc>,
    holding: Vec<IapHoldingDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IapDemandDoc {
    t: usize,
    d: RatText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IapHoldingDoc {
    s: usize,
    t: usize,
    h: RatText,
}

fn parse_capacity(cap: &Option<RatText>) -> Result<Option<Rat>, ParseError> {
    match cap {
        None => Ok(None),
        Some(c) => {
            let u = c.value("capacity")?;
            if !u.is_positive() {
                return Err(field_err("capacity", "capacity must be positive"));
            }
            Ok(Some(u))
        }
    }
}

pub fn serialize_instance(inst: &Instance) -> String {
    let doc = InstanceDoc {
        n: inst.n,
        horizon: inst.horizon,
        variant: inst.variant,
        capacity: inst.capacity.as_ref().map(RatText::of),
        weights: inst
            .weights
            .iter()
            .map(|row| row.iter().map(RatText::of).collect())
            .collect(),
        facility_costs: inst.facility_costs.iter().map(RatText::of).collect(),
        demands: inst
            .demands
            .iter()
            .map(|d| DemandDoc {
                v: d.vertex,
                t: d.day,
                d: RatText::of(&d.amount),
            })
            .collect(),
        holding: inst
            .demands
            .iter()
            .flat_map(|d| {
                d.holding.iter().enumerate().map(move |(i, h)| HoldingDoc {
                    v: d.vertex,
                    s: i + 1,
                    t: d.day,
                    h: RatText::of(h),
                })
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("instance documents always serialize")
}

pub fn serialize_iap(iap: &IapInstance) -> String {
    let doc = IapDoc {
        horizon: iap.horizon,
        variant: iap.variant,
        capacity: iap.capacity.as_ref().map(RatText::of),
        distance: RatText::of(&iap.distance),
        demands: iap
            .demands
            .iter()
            .map(|d| IapDemandDoc {
                t: d.day,
                d: RatText::of(&d.amount),
            })
            .collect(),
        holding: iap
            .holding
            .iter()
            .enumerate()
            .flat_map(|(ti, row)| {
                row.iter().enumerate().map(move |(si, h)| IapHoldingDoc {
                    s: si + 1,
                    t: ti + 1,
                    h: RatText::of(h),
                })
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("IAP documents always serialize")
}

pub fn serialize(problem: &Problem) -> String {
    match problem {
        Problem::Sirpfl(i) => serialize_instance(i),
        Problem::Iap(i) => serialize_iap(i),
    }
}

/// Parses either document kind; IAP documents are recognised by their
/// `distance` field.
pub fn parse(text: &str) -> Result<Problem, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("distance").is_some() {
        parse_iap(text).map(Problem::Iap)
    } else {
        parse_instance(text).map(Problem::Sirpfl)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let n = doc.n;
    if doc.horizon == 0 {
        return Err(field_err("T", "horizon must be at least 1"));
    }
    if doc.weights.len() != n {
        return Err(field_err("weights", format!("expected {n} rows")));
    }
    let mut weights = Vec::with_capacity(n);
    for (u, row) in doc.weights.iter().enumerate() {
        if row.len() != n {
            return Err(field_err(format!("weights[{u}]"), format!("expected {n} entries")));
        }
        let mut parsed = Vec::with_capacity(n);
        for (v, w) in row.iter().enumerate() {
            parsed.push(w.nonnegative(&format!("weights[{u}][{v}]"))?);
        }
        weights.push(parsed);
    }
    if doc.facility_costs.len() != n {
        return Err(field_err("facility_costs", format!("expected {n} entries")));
    }
    let facility_costs = doc
        .facility_costs
        .iter()
        .enumerate()
        .map(|(v, f)| f.nonnegative(&format!("facility_costs[{v}]")))
        .collect::<Result<Vec<_>, _>>()?;

    let mut amounts: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    let mut dropped: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, d) in doc.demands.iter().enumerate() {
        let field = format!("demands[{i}]");
        if d.v >= n {
            return Err(field_err(format!("{field}.v"), format!("vertex {} >= n = {n}", d.v)));
        }
        if d.t == 0 || d.t > doc.horizon {
            return Err(field_err(
                format!("{field}.t"),
                format!("day {} outside 1..={}", d.t, doc.horizon),
            ));
        }
        let amount = d.d.nonnegative(&format!("{field}.d"))?;
        if amounts.contains_key(&(d.v, d.t)) || dropped.contains(&(d.v, d.t)) {
            return Err(field_err(field, format!("duplicate demand ({},{})", d.v, d.t)));
        }
        if amount.is_zero() {
            dropped.insert((d.v, d.t));
        } else {
            amounts.insert((d.v, d.t), amount);
        }
    }

    let mut holding: BTreeMap<(usize, usize), Vec<Option<Rat>>> = amounts
        .keys()
        .map(|&(v, t)| ((v, t), vec![None; t]))
        .collect();
    for (i, h) in doc.holding.iter().enumerate() {
        let field = format!("holding[{i}]");
        if dropped.contains(&(h.v, h.t)) {
            continue;
        }
        let Some(slots) = holding.get_mut(&(h.v, h.t)) else {
            return Err(field_err(
                field,
                format!("no demand point ({},{}) for this holding cost", h.v, h.t),
            ));
        };
        if h.s == 0 || h.s > h.t {
            return Err(field_err(format!("{field}.s"), format!("day {} not in 1..={}", h.s, h.t)));
        }
        if slots[h.s - 1].is_some() {
            return Err(field_err(field, "duplicate holding entry"));
        }
        slots[h.s - 1] = Some(h.h.nonnegative(&format!("{field}.h"))?);
    }

    let mut demands = Vec::with_capacity(amounts.len());
    for ((v, t), amount) in amounts {
        let slots = holding.remove(&(v, t)).expect("slots created per demand");
        let mut costs = Vec::with_capacity(t);
        for (i, slot) in slots.into_iter().enumerate() {
            costs.push(slot.ok_or_else(|| {
                field_err("holding", format!("missing entry for (v={v}, s={}, t={t})", i + 1))
            })?);
        }
        demands.push(DemandPoint {
            vertex: v,
            day: t,
            amount,
            holding: costs,
        });
    }

    Ok(Instance::new(
        doc.horizon,
        doc.variant,
        parse_capacity(&doc.capacity)?,
        weights,
        facility_costs,
        demands,
    ))
}

pub fn parse_iap(text: &str) -> Result<IapInstance, ParseError> {
    let doc: IapDoc = serde_json::from_str(text)?;
    if doc.horizon == 0 {
        return Err(field_err("T", "horizon must be at least 1"));
    }
    let distance = doc.distance.nonnegative("distance")?;
    let mut demands = Vec::new();
    for (i, d) in doc.demands.iter().enumerate() {
        let field = format!("demands[{i}]");
        if d.t == 0 || d.t > doc.horizon {
            return Err(field_err(
                format!("{field}.t"),
                format!("day {} outside 1..={}", d.t, doc.horizon),
            ));
        }
        let amount = d.d.nonnegative(&format!("{field}.d"))?;
        if !amount.is_zero() {
            demands.push(IapDemand { day: d.t, amount });
        }
    }
    demands.sort_by_key(|d| d.day);

    let mut table: Vec<Vec<Option<Rat>>> = (1..=doc.horizon).map(|t| vec![None; t]).collect();
    for (i, h) in doc.holding.iter().enumerate() {
        let field = format!("holding[{i}]");
        if h.t == 0 || h.t > doc.horizon || h.s == 0 || h.s > h.t {
            return Err(field_err(field, format!("(s={}, t={}) out of range", h.s, h.t)));
        }
        let slot = &mut table[h.t - 1][h.s - 1];
        if slot.is_some() {
            return Err(field_err(field, "duplicate holding entry"));
        }
        *slot = Some(h.h.nonnegative(&format!("{field}.h"))?);
    }
    let due: BTreeSet<usize> = demands.iter().map(|d| d.day).collect();
    let mut holding = Vec::with_capacity(doc.horizon);
    for (ti, row) in table.into_iter().enumerate() {
        let t = ti + 1;
        let mut costs = Vec::with_capacity(t);
        for (si, slot) in row.into_iter().enumerate() {
            match slot {
                Some(h) => costs.push(h),
                None if due.contains(&t) => {
                    return Err(field_err(
                        "holding",
                        format!("missing entry for (s={}, t={t})", si + 1),
                    ))
                }
                None => costs.push(Rat::zero()),
            }
        }
        holding.push(costs);
    }

    Ok(IapInstance {
        distance,
        horizon: doc.horizon,
        variant: doc.variant,
        capacity: parse_capacity(&doc.capacity)?,
        demands,
        holding,
    })
}
