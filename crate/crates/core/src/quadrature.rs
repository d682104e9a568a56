//! Symmetric quadrature rules on triangles, in barycentric coordinates.
//! Weights are normalized to sum to one; multiply by the triangle area.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;

/// Selectable rule: 1-point centroid, 3-point interior (degree 2), or the
/// 7-point interior rule (degree 5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(try_from = "u8", into = "u8")]
pub enum QuadOrder {
    One,
    #[default]
    Two,
    Three,
}

impl TryFrom<u8> for QuadOrder {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(QuadOrder::One),
            2 => Ok(QuadOrder::Two),
            3 => Ok(QuadOrder::Three),
            other => Err(format!("quadrature order must be 1, 2 or 3, got {other}")),
        }
    }
}

impl From<QuadOrder> for u8 {
    fn from(q: QuadOrder) -> u8 {
        match q {
            QuadOrder::One => 1,
            QuadOrder::Two => 2,
            QuadOrder::Three => 3,
        }
    }
}

/// One quadrature point: barycentric coordinates and normalized weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub bary: [f64; 3],
    pub weight: f64,
}

const CENTROID: [QuadPoint; 1] = [QuadPoint {
    bary: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    weight: 1.0,
}];

const THREE_POINT: [QuadPoint; 3] = [
    QuadPoint {
        bary: [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        weight: 1.0 / 3.0,
    },
    QuadPoint {
        bary: [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        weight: 1.0 / 3.0,
    },
    QuadPoint {
        bary: [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
        weight: 1.0 / 3.0,
    },
];

// (6 ∓ √15)/21 and (155 ∓ √15)/1200
const A1: f64 = 0.101_286_507_323_456_34;
const B1: f64 = 0.797_426_985_353_087_3;
const W1: f64 = 0.125_939_180_544_827_15;
const A2: f64 = 0.470_142_064_105_115_1;
const B2: f64 = 0.059_715_871_789_769_82;
const W2: f64 = 0.132_394_152_788_506_18;

const SEVEN_POINT: [QuadPoint; 7] = [
    QuadPoint {
        bary: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        weight: 0.225,
    },
    QuadPoint {
        bary: [A1, A1, B1],
        weight: W1,
    },
    QuadPoint {
        bary: [A1, B1, A1],
        weight: W1,
    },
    QuadPoint {
        bary: [B1, A1, A1],
        weight: W1,
    },
    QuadPoint {
        bary: [A2, A2, B2],
        weight: W2,
    },
    QuadPoint {
        bary: [A2, B2, A2],
        weight: W2,
    },
    QuadPoint {
        bary: [B2, A2, A2],
        weight: W2,
    },
];

impl QuadOrder {
    pub fn points(self) -> &'static [QuadPoint] {
        match self {
            QuadOrder::One => &CENTROID,
            QuadOrder::Two => &THREE_POINT,
            QuadOrder::Three => &SEVEN_POINT,
        }
    }

    /// Highest total polynomial degree integrated exactly.
    pub fn degree(self) -> u32 {
        match self {
            QuadOrder::One => 1,
            QuadOrder::Two => 2,
            QuadOrder::Three => 5,
        }
    }
}

/// Cartesian position of barycentric point `bary` in triangle `p`.
pub fn map_point(p: &[Point; 3], bary: &[f64; 3]) -> Point {
    Point::new(
        bary[0] * p[0].x + bary[1] * p[1].x + bary[2] * p[2].x,
        bary[0] * p[0].y + bary[1] * p[1].y + bary[2] * p[2].y,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫_T λ1^a λ2^b λ3^c = 2|T| a! b! c! / (a+b+c+2)!  (normalized: divide by |T|).
    fn monomial_exact(a: u32, b: u32, c: u32) -> f64 {
        let f = |n: u32| (1..=n).map(f64::from).product::<f64>();
        2.0 * f(a) * f(b) * f(c) / f(a + b + c + 2)
    }

    #[test]
    fn weights_sum_to_one() {
        for q in [QuadOrder::One, QuadOrder::Two, QuadOrder::Three] {
            let s: f64 = q.points().iter().map(|p| p.weight).sum();
            assert!((s - 1.0).abs() < 1e-15);
            for p in q.points() {
                assert!((p.bary.iter().sum::<f64>() - 1.0).abs() < 1e-15);
                assert!(p.bary.iter().all(|&l| l > 0.0));
            }
        }
    }

    #[test]
    fn exact_up_to_stated_degree() {
        for q in [QuadOrder::One, QuadOrder::Two, QuadOrder::Three] {
            for a in 0..=5u32 {
                for b in 0..=5 - a {
                    for c in 0..=5 - a - b {
                        let deg = a + b + c;
                        let got: f64 = q
                            .points()
                            .iter()
                            .map(|p| {
                                p.weight
                                    * p.bary[0].powi(a as i32)
                                    * p.bary[1].powi(b as i32)
                                    * p.bary[2].powi(c as i32)
                            })
                            .sum();
                        let err = (got - monomial_exact(a, b, c)).abs();
                        if deg <= q.degree() {
                            assert!(err < 1e-15, "{q:?} ({a},{b},{c}) err {err}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_from_integer() {
        assert_eq!(QuadOrder::try_from(3), Ok(QuadOrder::Three));
        assert!(QuadOrder::try_from(4).is_err());
    }
}
