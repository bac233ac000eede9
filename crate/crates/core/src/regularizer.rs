//! Gauge penalties: the l1 norm and the sorted l1 (SLOPE) norm
//! `p(x) = Σ γ_i |x|_(i)`, where `|x|_(1) ≥ |x|_(2) ≥ ...`.

use std::cmp::Ordering;

use crate::data::SparseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Regularizer {
    L1,
    /// Weights are nonincreasing, nonnegative, with `weights[0] > 0`.
    SortedL1 { weights: Vec<f64> },
}

/// Named weight schedules for the sorted l1 penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSchedule {
    /// `γ_i = 1 − (i−1)/(n−1)`
    Linear,
    /// `γ_i = 1`
    Constant,
}

impl WeightSchedule {
    pub fn weights(self, n: usize) -> Vec<f64> {
        match self {
            WeightSchedule::Constant => vec![1.0; n],
            WeightSchedule::Linear if n == 1 => vec![1.0],
            WeightSchedule::Linear => (0..n)
                .map(|i| 1.0 - i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Magnitude order of `v`: indices sorted by `|v_i|` descending, ties by index.
fn magnitude_order(v: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| {
        v[j].abs()
            .partial_cmp(&v[i].abs())
            .unwrap_or(Ordering::Equal)
    });
    order
}

impl Regularizer {
    pub fn l1() -> Self {
        Regularizer::L1
    }

    pub fn sorted_l1(weights: Vec<f64>) -> Result<Self> {
        match weights.first() {
            None => return Err(Error::InvalidParameter("empty weight vector".into())),
            Some(&w) if !(w > 0.0) => {
                return Err(Error::InvalidParameter("first weight must be positive".into()))
            }
            _ => {}
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter("weights must be finite and >= 0".into()));
        }
        if weights.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter("weights must be nonincreasing".into()));
        }
        Ok(Regularizer::SortedL1 { weights })
    }

    pub fn slope(schedule: WeightSchedule, n: usize) -> Result<Self> {
        Self::sorted_l1(schedule.weights(n))
    }

    pub fn is_l1(&self) -> bool {
        matches!(self, Regularizer::L1)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regularizer::L1 => "l1",
            Regularizer::SortedL1 { .. } => "slope",
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        match self {
            Regularizer::SortedL1 { weights } if weights.len() != len => {
                Err(Error::DimensionMismatch {
                    expected: weights.len(),
                    got: len,
                })
            }
            _ => Ok(()),
        }
    }

    /// The penalty on a coordinate subset of size `k`: for vectors supported
    /// on `k` coordinates the zeros sort last, so only the leading `k` sorted
    /// weights ever apply.
    pub fn restrict(&self, k: usize) -> Regularizer {
        match self {
            Regularizer::L1 => Regularizer::L1,
            Regularizer::SortedL1 { weights } => Regularizer::SortedL1 {
                weights: weights[..k.min(weights.len())].to_vec(),
            },
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(match self {
            Regularizer::L1 => x.iter().map(|v| v.abs()).sum(),
            Regularizer::SortedL1 { weights } => {
                let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                mags.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
                mags.iter().zip(weights).map(|(m, w)| m * w).sum()
            }
        })
    }

    /// `argmin_z t·p(z) + ½‖z − v‖²`
    pub fn prox(&self, v: &[f64], t: f64) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("prox step t = {t} must be > 0")));
        }
        let mut out = vec![0.0; v.len()];
        self.prox_into(v, t, &mut out);
        Ok(out)
    }

    /// Unchecked [`prox`](Self::prox) writing into `out`.
    pub(crate) fn prox_into(&self, v: &[f64], t: f64, out: &mut [f64]) {
        match self {
            Regularizer::L1 => {
                for (o, &vi) in out.iter_mut().zip(v) {
                    *o = vi.signum() * (vi.abs() - t).max(0.0);
                }
            }
            Regularizer::SortedL1 { weights } => sorted_l1_prox(v, t, weights, out),
        }
    }

    /// Polar gauge `p°(z) = sup { ⟨z, x⟩ : p(x) ≤ 1 }`.
    pub fn polar(&self, z: &[f64]) -> Result<f64> {
        self.check_len(z.len())?;
        Ok(match self {
            Regularizer::L1 => z.iter().fold(0.0, |m, v| m.max(v.abs())),
            Regularizer::SortedL1 { weights } => {
                let mut mags: Vec<f64> = z.iter().map(|v| v.abs()).collect();
                mags.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
                let (mut num, mut den, mut best) = (0.0, 0.0, 0.0f64);
                for (m, w) in mags.iter().zip(weights) {
                    num += m;
                    den += w;
                    if den > 0.0 {
                        best = best.max(num / den);
                    }
                }
                best
            }
        })
    }

    /// `λ_∞ = p°(Aᵀ b)`: for every `λ ≥ λ_∞` the zero vector solves the
    /// regularized problem.
    pub fn lambda_inf(&self, a: &SparseMatrix, b: &[f64]) -> Result<f64> {
        let atb = a.rmatvec(b)?;
        let li = self.polar(&atb)?;
        if li == 0.0 {
            return Err(Error::DegenerateLambdaInf);
        }
        Ok(li)
    }
}

/// Sorted-l1 prox: sort magnitudes descending, subtract `t·γ`, project onto
/// the nonincreasing nonnegative cone with a stack-based pool-adjacent-
/// violators pass, then undo the sort and restore signs.
fn sorted_l1_prox(v: &[f64], t: f64, weights: &[f64], out: &mut [f64]) {
    let order = magnitude_order(v);
    // (first index, len, sum) per block
    let mut blocks: Vec<(usize, usize, f64)> = Vec::with_capacity(v.len());
    for (pos, &i) in order.iter().enumerate() {
        let w = v[i].abs() - t * weights[pos];
        blocks.push((pos, 1, w));
        while blocks.len() > 1 {
            let (_, l1, s1) = blocks[blocks.len() - 2];
            let (_, l2, s2) = blocks[blocks.len() - 1];
            if s1 / l1 as f64 > s2 / l2 as f64 {
                break;
            }
            blocks.pop();
            let last = blocks.last_mut().unwrap();
            last.1 += l2;
            last.2 += s2;
        }
    }
    for (start, len, sum) in blocks {
        let val = (sum / len as f64).max(0.0);
        for &i in &order[start..start + len] {
            out[i] = if val > 0.0 { v[i].signum() * val } else { 0.0 };
        }
    }
}
