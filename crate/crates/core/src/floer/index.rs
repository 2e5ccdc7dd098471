use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::FloerError;

/// A transverse intersection point of two graded Lagrangians.
///
/// `L2` is normalised to phase 0 and `L1 = {z_i = r e^(i alpha_i)}` near the
/// point; `theta1` is the graded phase of `L1` there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedIntersection {
    pub n: usize,
    pub alphas: Vec<f64>,
    pub theta1: f64,
}

impl GradedIntersection {
    /// The same point seen from the other Lagrangian.
    pub fn dual(&self) -> GradedIntersection {
        GradedIntersection { n: self.n, alphas: self.alphas.iter().map(|a| PI - a).collect(), theta1: -self.theta1 }
    }

    /// Regrades `L1` by `[m]`, which lowers `theta1` by `m pi`.
    pub fn regraded(&self, m: i64) -> GradedIntersection {
        GradedIntersection { theta1: self.theta1 - m as f64 * PI, ..self.clone() }
    }

    fn validate(&self) -> Result<(), FloerError> {
        if self.alphas.len() != self.n {
            return Err(FloerError::Arity { expected: self.n, got: self.alphas.len() });
        }
        if let Some(&a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a < PI)) {
            return Err(FloerError::AngleRange(a));
        }
        Ok(())
    }
}

/// `(sum alpha_i - theta1) / pi`, which must be an integer within `idx_tol`.
pub fn floer_index(x: &GradedIntersection, idx_tol: f64) -> Result<i64, FloerError> {
    x.validate()?;
    let raw = (x.alphas.iter().sum::<f64>() - x.theta1) / PI;
    let k = raw.round();
    if (raw - k).abs() > idx_tol {
        return Err(FloerError::NotIntegral(raw));
    }
    Ok(k as i64)
}

/// The two Lagrangians have a graded connect sum at this point exactly when
/// the index is 1.
pub fn gradable_connect_sum(x: &GradedIntersection, idx_tol: f64) -> Result<bool, FloerError> {
    Ok(floer_index(x, idx_tol)? == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_point_has_index_one() {
        for n in 2..7 {
            let x = GradedIntersection { n, alphas: vec![PI / n as f64; n], theta1: 0.0 };
            assert_eq!(floer_index(&x, 1e-6), Ok(1));
            assert_eq!(gradable_connect_sum(&x, 1e-6), Ok(true));
            assert_eq!(floer_index(&x.dual(), 1e-6), Ok(n as i64 - 1));
        }
    }

    #[test]
    fn arithmetic_example() {
        let x = GradedIntersection { n: 2, alphas: vec![PI / 3.0, PI / 2.0], theta1: 5.0 * PI / 6.0 - 2.0 * PI };
        assert_eq!(floer_index(&x, 1e-6), Ok(2));
    }

    #[test]
    fn regrading_by_two_adds_two() {
        let x = GradedIntersection { n: 3, alphas: vec![PI / 3.0; 3], theta1: 0.0 };
        let y = x.regraded(2);
        assert_eq!(floer_index(&y, 1e-6), Ok(3));
        assert_eq!(gradable_connect_sum(&y, 1e-6), Ok(false));
    }

    #[test]
    fn rejects_bad_data() {
        let x = GradedIntersection { n: 2, alphas: vec![0.3, 0.4], theta1: 0.0 };
        assert!(matches!(floer_index(&x, 1e-6), Err(FloerError::NotIntegral(_))));
        let y = GradedIntersection { n: 2, alphas: vec![0.3, PI], theta1: 0.0 };
        assert_eq!(floer_index(&y, 1e-6), Err(FloerError::AngleRange(PI)));
        let z = GradedIntersection { n: 3, alphas: vec![0.3], theta1: 0.0 };
        assert_eq!(floer_index(&z, 1e-6), Err(FloerError::Arity { expected: 3, got: 1 }));
    }
}
