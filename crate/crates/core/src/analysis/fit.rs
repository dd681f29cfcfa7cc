use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use super::basin::{BasinGrid, BasinLabel};
use crate::error::{Error, Result};

/// Fewest boundary points a line fit accepts.
pub const MIN_BOUNDARY_POINTS: usize = 10;

/// Total-least-squares line through the basin boundary, in
/// (X₀, A₀, S₀) coordinates where X is the grid's third axis (L₀ for the
/// leader plane).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLineFit {
    /// Centroid of the boundary points.
    pub point: [f64; 3],
    /// Unit direction; the largest-magnitude component is positive.
    pub direction: [f64; 3],
    /// RMS perpendicular distance of the points from the line (workers).
    pub rms_residual: f64,
    pub n_points: usize,
}

/// ToEf cells with at least one face neighbour labelled ToEs, as
/// (X₀, A₀, S₀) triples.
pub fn boundary_points(grid: &BasinGrid) -> Vec<[f64; 3]> {
    let r = grid.resolution as isize;
    let mut points = Vec::new();
    for i_s in 0..r {
        for i_a in 0..r {
            for i_x in 0..r {
                if grid.label(i_s as usize, i_a as usize, i_x as usize) != BasinLabel::ToEf {
                    continue;
                }
                let touches = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
                    .iter()
                    .any(|(ds, da, dx)| {
                        let (s, a, x) = (i_s + ds, i_a + da, i_x + dx);
                        (0..r).contains(&s)
                            && (0..r).contains(&a)
                            && (0..r).contains(&x)
                            && grid.label(s as usize, a as usize, x as usize) == BasinLabel::ToEs
                    });
                if touches {
                    let [s, a, x] = grid.coordinates(i_s as usize, i_a as usize, i_x as usize);
                    points.push([x, a, s]);
                }
            }
        }
    }
    points
}

/// Principal-axis line through a point cloud.
pub fn fit_line(points: &[[f64; 3]]) -> Result<BoundaryLineFit> {
    if points.len() < MIN_BOUNDARY_POINTS {
        return Err(Error::InsufficientBoundaryPoints {
            found: points.len(),
            required: MIN_BOUNDARY_POINTS,
        });
    }
    let n = points.len() as f64;
    let centroid = points
        .iter()
        .fold(Vector3::zeros(), |acc, p| acc + Vector3::from(*p))
        / n;
    let cov = points.iter().fold(Matrix3::zeros(), |acc, p| {
        let d = Vector3::from(*p) - centroid;
        acc + d * d.transpose()
    }) / n;
    let eig = SymmetricEigen::new(cov);
    let k = eig.eigenvalues.imax();
    let mut dir: Vector3<f64> = eig.eigenvectors.column(k).normalize();
    if dir[dir.iamax()] < 0.0 {
        dir = -dir;
    }
    let ss: f64 = points
        .iter()
        .map(|p| {
            let d = Vector3::from(*p) - centroid;
            (d - dir * d.dot(&dir)).norm_squared()
        })
        .sum();
    Ok(BoundaryLineFit {
        point: centroid.into(),
        direction: dir.into(),
        rms_residual: (ss / n).sqrt(),
        n_points: points.len(),
    })
}

/// Extracts the ToEf/ToEs boundary of a grid and fits a line through it.
pub fn fit_boundary_line(grid: &BasinGrid) -> Result<BoundaryLineFit> {
    fit_line(&boundary_points(grid))
}
