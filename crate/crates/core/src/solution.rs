use std::fmt;

use crate::graph::{is_s_forest, mask_vertices, Graph};
use crate::model::{Instance, VertexId, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverTag {
    Interval,
    CircularArc,
    Permutation,
    CoBipartite,
    Oracle,
}

impl SolverTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::Interval => "interval",
            SolverTag::CircularArc => "circular-arc",
            SolverTag::Permutation => "permutation",
            SolverTag::CoBipartite => "cobipartite",
            SolverTag::Oracle => "oracle",
        }
    }
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A removed set X and its complement Y, both ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub removed: Vec<VertexId>,
    pub retained: Vec<VertexId>,
    pub removed_weight: Weight,
    pub solver: SolverTag,
}

impl Solution {
    /// Builds a solution from a retained-vertex mask (length `n + 1`).
    pub fn from_retained(inst: &Instance, retained: &[bool], solver: SolverTag) -> Self {
        let n = inst.n();
        let removed: Vec<VertexId> = (1..=n).filter(|&v| !retained[v]).collect();
        let removed_weight = removed.iter().map(|&v| inst.weight(v)).sum();
        Solution {
            removed,
            retained: mask_vertices(&retained[..=n]),
            removed_weight,
            solver,
        }
    }

    pub fn retained_mask(&self, n: usize) -> Vec<bool> {
        crate::graph::vertex_mask(n, self.retained.iter().copied())
    }

    /// Checks the partition, the weight and the S-forest property.
    pub fn verify(&self, inst: &Instance, g: &Graph) -> Result<(), String> {
        let n = inst.n();
        let mut seen = vec![0u8; n + 1];
        for &v in self.removed.iter().chain(&self.retained) {
            if v == 0 || v > n {
                return Err(format!("vertex {v} is outside 1..={n}"));
            }
            seen[v] += 1;
        }
        if let Some(v) = (1..=n).find(|&v| seen[v] != 1) {
            return Err(format!("vertex {v} is not in exactly one of X and Y"));
        }
        let w: Weight = self.removed.iter().map(|&v| inst.weight(v)).sum();
        if w != self.removed_weight {
            return Err(format!("removed weight is {w}, solution claims {}", self.removed_weight));
        }
        if !is_s_forest(g, &inst.s_mask(), &self.retained_mask(n)) {
            return Err("retained set contains an S-cycle".into());
        }
        Ok(())
    }
}
