//! Irregular 1-D node sets, nearest-neighbour stars and least-squares weights.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("a node set needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("node coordinates must be finite and strictly increasing (index {0})")]
    NotIncreasing(usize),
    #[error("node {0} is a boundary node and has no star")]
    BoundaryCenter(usize),
    #[error("node index {0} is out of range")]
    OutOfRange(usize),
    #[error("star size must be at least {min}, got {got}")]
    StarTooSmall { min: usize, got: usize },
    #[error("star of size {wanted} requested around node {center} but only {available} other nodes exist")]
    NotEnoughNeighbors {
        center: usize,
        wanted: usize,
        available: usize,
    },
    #[error("weight power must be finite and positive, got {0}")]
    BadPower(f64),
}

/// Strictly increasing node coordinates; the first and last entries are the
/// Dirichlet boundary nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    coords: Vec<f64>,
}

impl NodeSet {
    pub fn new(coords: Vec<f64>) -> Result<Self, MeshError> {
        if coords.len() < 3 {
            return Err(MeshError::TooFewNodes(coords.len()));
        }
        for (i, w) in coords.windows(2).enumerate() {
            if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
                return Err(MeshError::NotIncreasing(i + 1));
            }
        }
        Ok(NodeSet { coords })
    }

    /// `count` equally spaced nodes from `lo` to `hi`, endpoints included.
    pub fn uniform(count: usize, lo: f64, hi: f64) -> Result<Self, MeshError> {
        if count < 3 {
            return Err(MeshError::TooFewNodes(count));
        }
        let n = (count - 1) as f64;
        let coords = (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / n
                }
            })
            .collect();
        NodeSet::new(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.coords[0]
    }

    pub fn hi(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        index == 0 || index + 1 == self.coords.len()
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.coords.len() - 1
    }
}

/// Neighbour stencil around a central node.
#[derive(Debug, Clone, PartialEq)]
pub struct Star {
    pub center: usize,
    pub center_x: f64,
    /// Member node indices ordered by distance from the center.
    pub members: Vec<usize>,
    pub coords: Vec<f64>,
    /// `x_i - x_0` for each member.
    pub offsets: Vec<f64>,
}

impl Star {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The `s` nodes nearest to `center`, ordered by distance with ties going to
/// the smaller index. Distances are compared after rounding to `1e-12` of the
/// domain length so that floating-point near-ties resolve deterministically.
pub fn nearest_neighbors(nodes: &NodeSet, center: usize, s: usize) -> Result<Vec<usize>, MeshError> {
    if center >= nodes.len() {
        return Err(MeshError::OutOfRange(center));
    }
    let available = nodes.len() - 1;
    if s > available {
        return Err(MeshError::NotEnoughNeighbors {
            center,
            wanted: s,
            available,
        });
    }
    let x0 = nodes.coords[center];
    let quantum = 1e-12 * (nodes.hi() - nodes.lo());
    let mut candidates: Vec<(u64, usize)> = nodes
        .coords
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != center)
        .map(|(j, &x)| (((x - x0).abs() / quantum).round() as u64, j))
        .collect();
    candidates.sort_unstable();
    Ok(candidates.into_iter().take(s).map(|(_, j)| j).collect())
}

pub fn build_star(nodes: &NodeSet, center: usize, s: usize) -> Result<Star, MeshError> {
    if center >= nodes.len() {
        return Err(MeshError::OutOfRange(center));
    }
    if nodes.is_boundary(center) {
        return Err(MeshError::BoundaryCenter(center));
    }
    if s < 2 {
        return Err(MeshError::StarTooSmall { min: 2, got: s });
    }
    let members = nearest_neighbors(nodes, center, s)?;
    let center_x = nodes.coords[center];
    let coords: Vec<f64> = members.iter().map(|&j| nodes.coords[j]).collect();
    let offsets = coords.iter().map(|&x| x - center_x).collect();
    Ok(Star {
        center,
        center_x,
        members,
        coords,
        offsets,
    })
}

/// Weight function `w(x_0, x_i)` of the least-squares functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightScheme {
    Constant,
    InverseDistancePower { power: f64 },
}

impl Default for WeightScheme {
    fn default() -> Self {
        WeightScheme::InverseDistancePower { power: 2.0 }
    }
}

impl WeightScheme {
    pub fn validate(&self) -> Result<(), MeshError> {
        match *self {
            WeightScheme::Constant => Ok(()),
            WeightScheme::InverseDistancePower { power } if power.is_finite() && power > 0.0 => Ok(()),
            WeightScheme::InverseDistancePower { power } => Err(MeshError::BadPower(power)),
        }
    }
}

pub fn weights_for(star: &Star, scheme: WeightScheme) -> Vec<f64> {
    star.offsets
        .iter()
        .map(|h| match scheme {
            WeightScheme::Constant => 1.0,
            WeightScheme::InverseDistancePower { power } => 1.0 / h.abs().powf(power),
        })
        .collect()
}

#[cfg(test)]
pub(crate) fn example_mesh() -> NodeSet {
    NodeSet::new(crate::harness::EXAMPLE_MESH.to_vec()).unwrap()
}
