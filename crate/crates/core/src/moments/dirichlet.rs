//! Moments of Dirichlet splines with general parameters.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::simplex_spline::{simplex_moment_recursive, MomentTable};
use crate::config::COALESCENT_MAX_WEIGHT;
use crate::error::{invalid, Error, Result};
use crate::multiindex::{enumerate_indices, IndexConstraint, MultiIndex};
use crate::simplex::{oracle_moment, DirichletParams, KnotSet};

/// Route used by [`dirichlet_moment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentStrategy {
    /// Multinomial expansion with exact Dirichlet monomial integrals.
    Expansion,
    /// Integer parameters realized as repeated knots of a simplex spline.
    CoalescentKnots,
    /// Parameter reduction `b → b - e_j` down to unit parameters.
    Recurrence,
    /// Repeated degree elevation `m_{β+d_l}(b) = Σ w_i x^i_l m_β(b+e_i)`.
    Elevation,
}

impl MomentStrategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Expansion => "expansion",
            Self::CoalescentKnots => "coalescent-knots",
            Self::Recurrence => "recurrence-54",
            Self::Elevation => "elevation",
        }
    }
}

impl fmt::Display for MomentStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MomentStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expansion" => Ok(Self::Expansion),
            "coalescent-knots" | "coalescent" => Ok(Self::CoalescentKnots),
            "recurrence" | "recurrence-54" => Ok(Self::Recurrence),
            "elevation" => Ok(Self::Elevation),
            other => invalid(format!("unknown moment strategy `{other}`")),
        }
    }
}

/// A moment together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub value: f64,
    pub strategy: MomentStrategy,
    /// Number of memoized intermediate moments.
    pub table_size: usize,
}

fn unavailable(strategy: MomentStrategy, reason: impl Into<String>) -> Error {
    Error::StrategyUnavailable {
        strategy: strategy.name(),
        reason: reason.into(),
    }
}

fn check_shapes(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex) -> Result<()> {
    if params.len() != knots.len() {
        return invalid(format!("{} parameters for {} knots", params.len(), knots.len()));
    }
    if beta.dim() != knots.dim() {
        return invalid(format!(
            "moment order has {} entries for knots in R^{}",
            beta.dim(),
            knots.dim()
        ));
    }
    Ok(())
}

/// `m_β(b;X)` by the requested strategy.
pub fn dirichlet_moment(
    params: &DirichletParams,
    knots: &KnotSet,
    beta: &MultiIndex,
    strategy: MomentStrategy,
) -> Result<f64> {
    dirichlet_moment_report(params, knots, beta, strategy).map(|r| r.value)
}

pub fn dirichlet_moment_report(
    params: &DirichletParams,
    knots: &KnotSet,
    beta: &MultiIndex,
    strategy: MomentStrategy,
) -> Result<MomentReport> {
    check_shapes(params, knots, beta)?;
    let report = |value, table_size| MomentReport {
        value,
        strategy,
        table_size,
    };
    if beta.is_zero() {
        return Ok(report(1.0, 0));
    }
    match strategy {
        MomentStrategy::Expansion => Ok(report(oracle_moment(params, knots, beta)?, 0)),
        MomentStrategy::CoalescentKnots => {
            let repeated = coalescent_knots(params, knots)?;
            let mut table = MomentTable::new(&repeated).map_err(|e| unavailable(strategy, e.to_string()))?;
            let v = simplex_moment_recursive(&repeated, beta, &mut table)?;
            Ok(report(v, table.len()))
        }
        MomentStrategy::Recurrence => {
            if !knots.volume_positive() {
                return Err(unavailable(strategy, "requires vol_s([X]) > 0"));
            }
            let mut reducer = Reducer {
                knots,
                memo: HashMap::new(),
                tables: 0,
            };
            let v = reducer.moment(params, beta)?;
            Ok(report(v, reducer.memo.len() + reducer.tables))
        }
        MomentStrategy::Elevation => {
            let table = ElevationTable::new(params, knots, beta.order())?;
            Ok(report(table.get(beta).expect("order within table"), table.len()))
        }
    }
}

/// Strategies tried by [`dirichlet_moment_auto`], in order.
pub const AUTO_ORDER: [MomentStrategy; 3] = [
    MomentStrategy::CoalescentKnots,
    MomentStrategy::Recurrence,
    MomentStrategy::Elevation,
];

/// The first strategy in [`AUTO_ORDER`] whose preconditions hold. Other
/// errors are returned as they are.
pub fn dirichlet_moment_auto(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex) -> Result<MomentReport> {
    let mut last = None;
    for s in AUTO_ORDER {
        match dirichlet_moment_report(params, knots, beta, s) {
            Ok(r) => return Ok(r),
            Err(e @ (Error::StrategyUnavailable { .. } | Error::Resource(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("AUTO_ORDER is not empty"))
}

/// The repeated-knot set realizing integer parameters `b` as a simplex
/// spline: knot `x^i` listed `b_i` times.
pub fn coalescent_knots(params: &DirichletParams, knots: &KnotSet) -> Result<KnotSet> {
    let strategy = MomentStrategy::CoalescentKnots;
    let Some(mult) = params.as_integers() else {
        return Err(unavailable(strategy, "all parameters must be positive integers"));
    };
    let total: u32 = mult.iter().sum();
    if total > COALESCENT_MAX_WEIGHT {
        return Err(Error::Resource(format!(
            "coalescent knots limited to Σ b_i <= {COALESCENT_MAX_WEIGHT}, got {total}"
        )));
    }
    if !knots.volume_positive() {
        return Err(unavailable(strategy, "requires vol_s([X]) > 0"));
    }
    knots.repeated(&mult)
}

/// Parameter reduction with
/// `(c+|β|-1) m_β(b) = (c-1) m_β(b-e_j) + Σ_l β_l x^j_l m_{β-d_l}(b)`,
/// pivoting on parameters `>= 2` so that no knot is ever dropped. The
/// recursion bottoms out at unit parameters (simplex spline) or, for
/// fractional parameters, at `b ∈ [1,2)^{n+1} ∪ (0,1)` via the expansion.
struct Reducer<'a> {
    knots: &'a KnotSet,
    memo: HashMap<(Vec<u64>, MultiIndex), f64>,
    tables: usize,
}

impl Reducer<'_> {
    fn moment(&mut self, params: &DirichletParams, beta: &MultiIndex) -> Result<f64> {
        if beta.is_zero() {
            return Ok(1.0);
        }
        let key = (params.b().iter().map(|v| v.to_bits()).collect::<Vec<_>>(), beta.clone());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let value = match params.b().iter().position(|&v| v >= 2.0) {
            Some(j) => {
                let c = params.c();
                let mut lowered = params.b().to_vec();
                lowered[j] -= 1.0;
                let lowered = DirichletParams::new(lowered)?;
                let xj = self.knots.point(j).to_vec();
                let mut acc = (c - 1.0) * self.moment(&lowered, beta)?;
                for (l, &e) in beta.entries().iter().enumerate() {
                    if e > 0 {
                        let lower = beta.minus_unit(l).expect("entry is positive");
                        acc += f64::from(e) * xj[l] * self.moment(params, &lower)?;
                    }
                }
                acc / (c + f64::from(beta.order()) - 1.0)
            }
            None if params.is_ones() => {
                let mut table = MomentTable::new(self.knots)?;
                let v = simplex_moment_recursive(self.knots, beta, &mut table)?;
                self.tables += table.len();
                v
            }
            None => oracle_moment(params, self.knots, beta)?,
        };
        self.memo.insert(key, value);
        Ok(value)
    }
}

/// All moments `m_β(b;X)` with `|β| <= max_order`, built from
/// `m_{β+d_l}(b+η) = Σ_i w_i(η) x^i_l m_β(b+η+e_i)` with
/// `w_i(η) = (b_i+η_i)/(c+|η|)`, down to `m_0 = 1`. Every step is a positive
/// combination, and nothing limits the order other than memory.
#[derive(Debug, Clone)]
pub struct ElevationTable {
    max_order: u32,
    values: HashMap<MultiIndex, f64>,
    work: usize,
}

impl ElevationTable {
    pub fn new(params: &DirichletParams, knots: &KnotSet, max_order: u32) -> Result<Self> {
        if params.len() != knots.len() {
            return invalid(format!("{} parameters for {} knots", params.len(), knots.len()));
        }
        let npar = params.len();
        let s = knots.dim();
        // η with |η| <= max_order in graded order; the set for |η| <= M is a prefix.
        let etas: Vec<MultiIndex> = (0..=max_order)
            .flat_map(|m| enumerate_indices(IndexConstraint::Order(m), npar))
            .collect();
        let prefix_len: Vec<usize> = (0..=max_order)
            .scan(0usize, |acc, m| {
                *acc += crate::multiindex::binomial(m + npar as u32 - 1, npar as u32 - 1) as usize;
                Some(*acc)
            })
            .collect();
        let rank: HashMap<&MultiIndex, usize> = etas.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let up_len = if max_order == 0 { 0 } else { prefix_len[max_order as usize - 1] };
        // Flat neighbour and weight tables: entry `idx * npar + i` refers to `η_idx + e_i`.
        let mut up = Vec::with_capacity(up_len * npar);
        let mut weights = Vec::with_capacity(up_len * npar);
        for e in &etas[..up_len] {
            let denom = params.c() + f64::from(e.order());
            for i in 0..npar {
                up.push(rank[&e.plus_unit(i)]);
                weights.push((params.b()[i] + f64::from(e[i])) / denom);
            }
        }
        drop(rank);

        let mut values = HashMap::new();
        values.insert(MultiIndex::zeros(s), 1.0);
        let mut work = 0usize;
        let mut prev: HashMap<MultiIndex, Vec<f64>> = HashMap::new();
        prev.insert(MultiIndex::zeros(s), vec![1.0; *prefix_len.last().unwrap()]);
        for r in 1..=max_order {
            let live = prefix_len[(max_order - r) as usize];
            let mut level = HashMap::new();
            for beta in enumerate_indices(IndexConstraint::Order(r), s) {
                let l = beta.entries().iter().position(|&e| e > 0).expect("order is positive");
                let lower = &prev[&beta.minus_unit(l).unwrap()];
                let coord: Vec<f64> = knots.coordinate_row(l);
                let vals: Vec<f64> = (0..live)
                    .map(|idx| {
                        let base = idx * npar;
                        (0..npar)
                            .map(|i| weights[base + i] * coord[i] * lower[up[base + i]])
                            .sum()
                    })
                    .collect();
                work += live;
                values.insert(beta.clone(), vals[0]);
                level.insert(beta, vals);
            }
            prev = level;
        }
        Ok(Self {
            max_order,
            values,
            work,
        })
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn get(&self, beta: &MultiIndex) -> Option<f64> {
        self.values.get(beta).copied()
    }

    /// Number of intermediate moments computed.
    pub fn len(&self) -> usize {
        self.work
    }

    pub fn is_empty(&self) -> bool {
        self.work == 0
    }
}

/// Moments `m_0..m_N` of the univariate spline with knots `z`, from
/// `m_r = r!/(c,r) · Σ_{|η|=r} ∏_i (b_i,η_i) z_i^{η_i}/η_i!`, summed as a
/// running convolution over the knots.
pub fn power_moments(params: &DirichletParams, z: &[f64], max_order: u32) -> Result<Vec<f64>> {
    if params.len() != z.len() {
        return invalid(format!("{} parameters for {} knots", params.len(), z.len()));
    }
    let len = max_order as usize + 1;
    let mut acc = vec![0.0; len];
    acc[0] = 1.0;
    let mut factor = vec![0.0; len];
    for (&b, &zi) in params.b().iter().zip(z) {
        factor[0] = 1.0;
        for k in 1..len {
            factor[k] = factor[k - 1] * (b + (k - 1) as f64) * zi / k as f64;
        }
        for r in (0..len).rev() {
            acc[r] = (0..=r).map(|k| factor[k] * acc[r - k]).sum();
        }
    }
    let c = params.c();
    let mut scale = 1.0;
    for (r, v) in acc.iter_mut().enumerate().skip(1) {
        scale *= r as f64 / (c + (r - 1) as f64);
        *v *= scale;
    }
    Ok(acc)
}
