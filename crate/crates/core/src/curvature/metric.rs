use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;

use crate::cartan::FamilyData;
use crate::expr::{coord, int, Chart, Coord, CoordSet, Expression, Symbol};
use crate::forms::Matrix;

use super::connection::family_frame;
use super::upoly::UPoly;
use super::{Check, CurvatureError};

/// Coordinates of `M`, in the order used for every tensor index.
pub const M_COORDS: [Coord; 4] = [Coord::X, Coord::Y, Coord::Z, Coord::T];

/// A symmetric nondegenerate metric on `(x, y, z, t)`.
#[derive(Clone, Debug)]
pub struct Metric4 {
    g: Matrix<Expression>,
    inverse: OnceLock<Matrix<Expression>>,
}

impl PartialEq for Metric4 {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

/// Numbers of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub const SPLIT: Signature = Signature {
        positive: 2,
        negative: 2,
        zero: 0,
    };
}

fn m_coords() -> CoordSet {
    M_COORDS.into_iter().collect()
}

impl Metric4 {
    pub fn new(g: Matrix<Expression>) -> Result<Self, CurvatureError> {
        if g.rows() != 4 || g.cols() != 4 {
            return Err(CurvatureError::WrongShape(g.rows(), g.cols()));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if g.get(i, j) != g.get(j, i) {
                    return Err(CurvatureError::NotSymmetric(i, j));
                }
            }
            for j in 0..4 {
                let deps = g.get(i, j).dependencies();
                if let Some(c) = deps.iter().find(|c| !m_coords().contains(*c)) {
                    return Err(CurvatureError::ForeignDependency(c));
                }
            }
        }
        let inverse = OnceLock::new();
        match g.inverse() {
            Some(inv) => {
                let _ = inverse.set(inv);
            }
            None => return Err(CurvatureError::DegenerateMetric),
        }
        Ok(Metric4 { g, inverse })
    }

    /// `2 dt dx + 2 dz dy`.
    pub fn flat() -> Self {
        let mut g = Matrix::zeros(4, 4);
        for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
            g.set(i, j, int(1));
        }
        Self::new(g).expect("flat metric is nondegenerate")
    }

    pub fn components(&self) -> &Matrix<Expression> {
        &self.g
    }

    pub fn get(&self, i: usize, j: usize) -> &Expression {
        self.g.get(i, j)
    }

    pub fn inverse(&self) -> &Matrix<Expression> {
        self.inverse
            .get_or_init(|| self.g.inverse().expect("checked at construction"))
    }

    pub fn determinant(&self) -> Expression {
        self.g.determinant()
    }

    pub fn evaluate(
        &self,
        point: &BTreeMap<Symbol, BigRational>,
    ) -> Result<Matrix<BigRational>, CurvatureError> {
        let mut out = Matrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                out.set(i, j, self.g.get(i, j).evaluate(point)?);
            }
        }
        Ok(out)
    }

    /// Exact signature at a rational point. The characteristic polynomial of a
    /// symmetric matrix has only real roots, so Descartes' rule counts them exactly.
    pub fn signature_at(
        &self,
        point: &BTreeMap<Symbol, BigRational>,
    ) -> Result<Signature, CurvatureError> {
        let chi = UPoly::charpoly(&self.evaluate(point)?);
        Ok(Signature {
            positive: chi.sign_changes(),
            negative: chi.reflect().sign_changes(),
            zero: chi.zero_multiplicity(),
        })
    }
}

/// The metric of the family together with its origin on `P`.
#[derive(Clone, Debug)]
pub struct FamilyMetric {
    pub metric: Metric4,
    /// `G̃ = 2τ¹τ² + 2τ³τ⁴` on `(x, y, z, t, α, p)`.
    pub tilde: Matrix<Expression>,
    /// `G̃` has no `dα`, `dp` legs, its coefficients do not involve `α, p`, and
    /// it equals `G` on `(x, y, z, t)`.
    pub projectability: Check,
}

/// `G = −(t² + 2B) dx² + 2 dt dx + (2A − z²) dy² + 2 dz dy`.
pub fn metric_from_family(fd: &FamilyData) -> Result<FamilyMetric, CurvatureError> {
    let (z, t) = (coord(Coord::Z), coord(Coord::T));
    let mut g = Matrix::zeros(4, 4);
    g.set(0, 0, -(t.pow(2) + int(2) * &fd.b));
    g.set(1, 1, int(2) * &fd.a - z.pow(2));
    for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
        g.set(i, j, int(1));
    }
    let metric = Metric4::new(g)?;

    let frame = family_frame(fd)?;
    let cf = frame.basis.coframe().matrix();
    let tilde = Matrix::from_fn(6, 6, |a, b| {
        let pair = |u: usize, v: usize| cf.get(u, a) * cf.get(v, b) + cf.get(v, a) * cf.get(u, b);
        pair(0, 1) + pair(2, 3)
    });
    let chart = Chart::MAdapted.coords();
    let mut check = Check::new("projectability of G~");
    for a in 0..6 {
        for b in a..6 {
            let v = tilde.get(a, b);
            let label = format!("G~[{},{}]", chart[a].name(), chart[b].name());
            if a >= 4 || b >= 4 {
                check.push(label, v.clone());
            } else {
                check.push(format!("d/dalpha {label}"), v.diff(Coord::Alpha));
                check.push(format!("d/dp {label}"), v.diff(Coord::P));
                check.push(format!("{label} - G"), v - metric.get(a, b));
            }
        }
    }
    Ok(FamilyMetric {
        metric,
        tilde,
        projectability: check,
    })
}
