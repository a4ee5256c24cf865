//! Finite sampled metric spaces: point samples with a distance function,
//! metric-axiom validation, and balls.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::koranyi_distance_coords;

/// How distances between coordinate payloads are computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MetricFn {
    /// lp norm of the coordinate difference; `p = f64::INFINITY` is the max norm.
    LpNorm(f64),
    /// Distance on the circle R/Z between representatives: `min_k |a - b - k|`.
    CircleMod1,
    /// Left-invariant Koranyi distance on first-Heisenberg coordinates (x, y, t).
    Koranyi,
    /// Explicit symmetric distance table, indexed by point position.
    Table(Vec<Vec<f64>>),
}

impl MetricFn {
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            MetricFn::LpNorm(p) => lp_distance(*p, a, b),
            MetricFn::CircleMod1 => circle_distance(a[0], b[0]),
            MetricFn::Koranyi => koranyi_distance_coords(a, b),
            MetricFn::Table(_) => {
                unreachable!("table metrics are evaluated by point index, not payload")
            }
        }
    }
}

/// lp distance between coordinate vectors; `p >= 1` or infinity.
pub fn lp_distance(p: f64, a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if p.is_infinite() {
        return a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
    }
    if p == 2.0 {
        return a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
    }
    if p == 1.0 {
        return a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Distance between circle representatives: `min_k |a - b - k|`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = a - b;
    let frac = d - d.round();
    frac.abs()
}

/// A finite sample of a metric space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSpace {
    points: Vec<Vec<f64>>,
    metric: MetricFn,
    tol: f64,
}

impl MetricSpace {
    pub fn new(points: Vec<Vec<f64>>, metric: MetricFn, tol: f64) -> Result<MetricSpace> {
        if let MetricFn::Table(table) = &metric {
            if table.len() != points.len() || table.iter().any(|row| row.len() != points.len()) {
                return Err(Error::InvalidArgument(format!(
                    "distance table must be {n} x {n}",
                    n = points.len()
                )));
            }
        }
        Ok(MetricSpace {
            points,
            metric,
            tol,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> &[f64] {
        &self.points[idx]
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn metric(&self) -> &MetricFn {
        &self.metric
    }

    /// Distance between two sampled points by index.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            MetricFn::Table(table) => table[i][j],
            other => other.dist(&self.points[i], &self.points[j]),
        }
    }

    /// Distance between arbitrary coordinate payloads (not available for
    /// table metrics).
    pub fn dist_coords(&self, a: &[f64], b: &[f64]) -> f64 {
        self.metric.dist(a, b)
    }

    /// Index of the sampled point equal to `coords` within `tol`, if any.
    pub fn find(&self, coords: &[f64]) -> Option<usize> {
        self.points.iter().position(|p| {
            p.len() == coords.len() && p.iter().zip(coords).all(|(a, b)| (a - b).abs() <= self.tol)
        })
    }

    /// Indices of all points at distance <= r from `center`; `punctured`
    /// excludes the center itself.
    pub fn ball(&self, center: usize, r: f64, punctured: bool) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                if punctured && j == center {
                    return false;
                }
                self.dist(center, j) <= r
            })
            .collect()
    }
}

/// One metric-axiom violation record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomViolation {
    /// Point indices involved: 1 for identity, 2 for symmetry, 3 for triangle.
    pub points: Vec<usize>,
    /// How far past the tolerance the axiom was violated.
    pub excess: f64,
}

/// Result of checking the metric axioms on a sample.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AxiomReport {
    pub identity: Vec<AxiomViolation>,
    pub symmetry: Vec<AxiomViolation>,
    pub triangle: Vec<AxiomViolation>,
    pub nonnegativity: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.identity.is_empty()
            && self.symmetry.is_empty()
            && self.triangle.is_empty()
            && self.nonnegativity.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.identity.len() + self.symmetry.len() + self.triangle.len() + self.nonnegativity.len()
    }
}

/// Check identity, symmetry and the triangle inequality on every sampled
/// pair/triple, reporting all violations exceeding `tol`.
pub fn validate_metric(space: &MetricSpace, tol: f64) -> AxiomReport {
    let n = space.len();
    let mut report = AxiomReport::default();
    if n == 0 {
        return report;
    }

    // Dense matrix so the O(n^3) triangle scan is lookups only.
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| space.dist(i, j)).collect())
        .collect();

    for (i, row) in matrix.iter().enumerate() {
        if row[i].abs() > tol {
            report.identity.push(AxiomViolation {
                points: vec![i],
                excess: row[i].abs() - tol,
            });
        }
        for (j, &d) in row.iter().enumerate() {
            if d < -tol {
                report.nonnegativity.push(AxiomViolation {
                    points: vec![i, j],
                    excess: -d - tol,
                });
            }
            if j > i {
                let gap = (d - matrix[j][i]).abs();
                if gap > tol {
                    report.symmetry.push(AxiomViolation {
                        points: vec![i, j],
                        excess: gap - tol,
                    });
                }
            }
        }
    }

    let mut triangle: Vec<AxiomViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let matrix = &matrix;
            (0..n).flat_map(move |j| {
                (0..n).filter_map(move |k| {
                    let lhs = matrix[i][k];
                    let rhs = matrix[i][j] + matrix[j][k];
                    if lhs > rhs + tol {
                        Some(AxiomViolation {
                            points: vec![i, j, k],
                            excess: lhs - rhs - tol,
                        })
                    } else {
                        None
                    }
                })
            })
        })
        .collect();
    triangle.sort_by(|a, b| a.points.cmp(&b.points));
    report.triangle = triangle;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> MetricSpace {
        MetricSpace::new(
            points.iter().map(|&x| vec![x]).collect(),
            MetricFn::LpNorm(2.0),
            1e-12,
        )
        .unwrap()
    }

    #[test]
    fn collinear_reals_are_a_metric_space() {
        let space = line(&[0.0, 1.0, 2.0]);
        let report = validate_metric(&space, 1e-12);
        assert!(report.is_valid(), "{report:?}");
    }

    #[test]
    fn asymmetric_table_reports_symmetry_violation() {
        let space = MetricSpace::new(
            vec![vec![0.0], vec![1.0]],
            MetricFn::Table(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            1e-12,
        )
        .unwrap();
        let report = validate_metric(&space, 1e-12);
        assert_eq!(report.symmetry.len(), 1);
        assert_eq!(report.symmetry[0].points, vec![0, 1]);
        assert!(report.identity.is_empty());
    }

    #[test]
    fn plane_triangle_is_valid() {
        let space = MetricSpace::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            MetricFn::LpNorm(2.0),
            1e-12,
        )
        .unwrap();
        assert!(validate_metric(&space, 1e-12).is_valid());
    }

    #[test]
    fn triangle_violation_is_detected() {
        // d(0,2) = 10 but d(0,1) + d(1,2) = 2.
        let table = vec![
            vec![0.0, 1.0, 10.0],
            vec![1.0, 0.0, 1.0],
            vec![10.0, 1.0, 0.0],
        ];
        let space = MetricSpace::new(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            MetricFn::Table(table),
            1e-12,
        )
        .unwrap();
        let report = validate_metric(&space, 1e-12);
        assert!(!report.triangle.is_empty());
    }

    #[test]
    fn punctured_ball_on_grid() {
        let space = line(&[0.0, 0.5, 1.0]);
        assert_eq!(space.ball(0, 0.6, true), vec![1]);
        assert_eq!(space.ball(0, 0.0, true), Vec::<usize>::new());
        let space2 = line(&[0.0, 1.0, 2.0]);
        assert_eq!(space2.ball(1, 1.0, false), vec![0, 1, 2]);
    }

    #[test]
    fn circle_distance_wraps() {
        assert!((circle_distance(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert!((circle_distance(0.2, 0.9) - 0.3).abs() < 1e-15);
        assert_eq!(circle_distance(0.4, 0.4), 0.0);
    }

    #[test]
    fn lp_special_cases_match_generic() {
        let a = [1.0, -2.0, 3.0];
        let b = [0.5, 1.5, -1.0];
        assert!((lp_distance(1.0, &a, &b) - (0.5 + 3.5 + 4.0)).abs() < 1e-12);
        let generic_two = (0.5f64.powi(2) + 3.5f64.powi(2) + 4.0f64.powi(2)).sqrt();
        assert!((lp_distance(2.0, &a, &b) - generic_two).abs() < 1e-12);
        assert_eq!(lp_distance(f64::INFINITY, &a, &b), 4.0);
    }
}
