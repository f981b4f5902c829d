//! Strict descending ladder decomposition of a discrete walk.
//!
//! The epochs are `T_0 = 0` and `T_n = min{k > T_{n-1} : V_k < V_{T_{n-1}}}`,
//! the heights are `H_n = -V_{T_n}` (so `H_0 = 0` and the heights increase
//! strictly), and the segment maxima are
//! `M_n = max{V_k + H_{n-1} : T_{n-1} <= k < T_n}` — the walk's excursion
//! peaks measured from the previous record low.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderDecomposition {
    /// `T_0 .. T_n`, starting at 0.
    pub epochs: Vec<u64>,
    /// `H_0 .. H_n`, starting at 0.
    pub heights: Vec<f64>,
    /// `M_1 .. M_n`.
    pub segment_maxima: Vec<f64>,
}

impl LadderDecomposition {
    /// Number of completed ladder epochs (excludes the origin).
    pub fn len(&self) -> usize {
        self.segment_maxima.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segment_maxima.is_empty()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LadderError {
    #[error("walk exhausted after {} of the requested ladder epochs", partial.len())]
    Exhausted { partial: LadderDecomposition },
    #[error("at least one ladder epoch must be requested")]
    NothingRequested,
}

/// Decompose the walk with the given steps into its first `n_ladders`
/// strict descending ladder epochs.
pub fn ladder_decomposition(
    steps: &[f64],
    n_ladders: usize,
) -> Result<LadderDecomposition, LadderError> {
    if n_ladders == 0 {
        return Err(LadderError::NothingRequested);
    }
    let mut epochs = vec![0u64];
    let mut heights = vec![0.0f64];
    let mut segment_maxima = Vec::new();

    let mut v = 0.0f64; // V_k
    let mut record = 0.0f64; // V at the last ladder epoch
    let mut seg_max = 0.0f64; // max V over [T_{n-1}, k]
    for (k, step) in steps.iter().enumerate() {
        v += step;
        if v < record {
            segment_maxima.push(seg_max + heights[heights.len() - 1]);
            epochs.push(k as u64 + 1);
            heights.push(-v);
            record = v;
            seg_max = v;
            if segment_maxima.len() == n_ladders {
                return Ok(LadderDecomposition {
                    epochs,
                    heights,
                    segment_maxima,
                });
            }
        } else {
            seg_max = seg_max.max(v);
        }
    }
    Err(LadderError::Exhausted {
        partial: LadderDecomposition {
            epochs,
            heights,
            segment_maxima,
        },
    })
}
