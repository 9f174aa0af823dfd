use crate::expr::{Chart, Coord, Expression, Substitution};

use super::form::{blade_indices, DifferentialForm};
use super::matrix::Matrix;
use super::FormError;

/// A rational map expressing every coordinate of `source` in terms of `target`
/// coordinates; pulls forms back from `source` to `target`.
#[derive(Clone, Debug)]
pub struct ChartMap {
    source: Chart,
    target: Chart,
    images: Vec<Expression>,
    substitution: Substitution,
    jacobian: Matrix<Expression>,
}

impl ChartMap {
    /// `images` gives each source coordinate as an expression on `target`;
    /// coordinates shared by both charts may be omitted (identity).
    pub fn new(
        source: Chart,
        target: Chart,
        images: impl IntoIterator<Item = (Coord, Expression)>,
    ) -> Result<Self, FormError> {
        let mut given: Vec<Option<Expression>> = vec![None; source.dim()];
        for (c, e) in images {
            let i = source.position(c).ok_or(FormError::CoordinateNotInChart {
                coord: c,
                chart: source,
            })?;
            for dep in e.dependencies().iter() {
                if !target.contains(dep) {
                    return Err(FormError::CoordinateNotInChart {
                        coord: dep,
                        chart: target,
                    });
                }
            }
            given[i] = Some(e);
        }
        let mut imgs = Vec::with_capacity(source.dim());
        let mut substitution = Substitution::new();
        for (i, &c) in source.coords().iter().enumerate() {
            let e = match given[i].take() {
                Some(e) => e,
                None if target.contains(c) => Expression::coord(c),
                None => return Err(FormError::IncompleteChartMap(c)),
            };
            if e != Expression::coord(c) {
                substitution.insert(c, e.clone());
            }
            imgs.push(e);
        }
        let jacobian = Matrix::from_fn(source.dim(), target.dim(), |i, j| {
            imgs[i].diff(target.coords()[j])
        });
        if source.dim() != target.dim() || jacobian.determinant().is_zero() {
            return Err(FormError::SingularChartMap);
        }
        Ok(ChartMap {
            source,
            target,
            images: imgs,
            substitution,
            jacobian,
        })
    }

    pub fn identity(chart: Chart) -> Self {
        Self::new(chart, chart, std::iter::empty()).expect("identity is regular")
    }

    /// `(x,y,p,q,α,γ) ↦ (x,y,p, p(t − zp), α, zp)`: the P chart seen from the
    /// adapted chart `(x,y,z,t,α,p)`, i.e. `z = γ/p`, `t = q/p + γ`.
    pub fn p_to_adapted() -> Self {
        let z = Expression::coord(Coord::Z);
        let t = Expression::coord(Coord::T);
        let p = Expression::coord(Coord::P);
        Self::new(
            Chart::P,
            Chart::MAdapted,
            [(Coord::Q, &p * &(&t - &(&z * &p))), (Coord::Gamma, &z * &p)],
        )
        .expect("regular chart change")
    }

    /// Inverse of [`ChartMap::p_to_adapted`].
    pub fn adapted_to_p() -> Self {
        let p = Expression::coord(Coord::P);
        let q = Expression::coord(Coord::Q);
        let g = Expression::coord(Coord::Gamma);
        Self::new(
            Chart::MAdapted,
            Chart::P,
            [(Coord::Z, &g / &p), (Coord::T, &(&q / &p) + &g)],
        )
        .expect("regular chart change")
    }

    pub fn source(&self) -> Chart {
        self.source
    }

    pub fn target(&self) -> Chart {
        self.target
    }

    pub fn image(&self, c: Coord) -> Option<&Expression> {
        self.source.position(c).map(|i| &self.images[i])
    }

    pub fn jacobian(&self) -> &Matrix<Expression> {
        &self.jacobian
    }

    pub fn pull_back_function(&self, f: &Expression) -> Result<Expression, FormError> {
        Ok(f.subs(&self.substitution)?)
    }

    pub fn pull_back(&self, form: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        if form.chart() != self.source {
            return Err(FormError::ChartMismatch {
                left: form.chart(),
                right: self.source,
            });
        }
        let differentials: Vec<DifferentialForm> = (0..self.source.dim())
            .map(|i| {
                let mut d = DifferentialForm::zero(self.target, 1);
                for j in 0..self.target.dim() {
                    let c = self.jacobian.get(i, j);
                    if !c.is_zero() {
                        d = &d + &DifferentialForm::from_component(self.target, &[j], c.clone());
                    }
                }
                d
            })
            .collect();
        let mut out = DifferentialForm::zero(self.target, form.degree());
        for (blade, f) in form.terms() {
            let mut piece = DifferentialForm::function(self.target, self.pull_back_function(f)?);
            for i in blade_indices(blade) {
                piece = piece.wedge(&differentials[i])?;
            }
            out = &out + &piece;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{coord, int};

    #[test]
    fn pull_back_dq() {
        let m = ChartMap::p_to_adapted();
        let dq = DifferentialForm::differential(Chart::P, Coord::Q).unwrap();
        let got = m.pull_back(&dq).unwrap();
        let (z, t, p) = (coord(Coord::Z), coord(Coord::T), coord(Coord::P));
        let want = DifferentialForm::one_form(
            Chart::MAdapted,
            [
                (Coord::P, &t - &(int(2) * z * p.clone())),
                (Coord::T, p.clone()),
                (Coord::Z, -p.pow(2)),
            ],
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn identity_and_round_trip() {
        let dq = DifferentialForm::differential(Chart::P, Coord::Q).unwrap();
        let dg = DifferentialForm::differential(Chart::P, Coord::Gamma).unwrap();
        let w = dq.wedge(&dg).unwrap().scale(&coord(Coord::Q));
        assert_eq!(ChartMap::identity(Chart::P).pull_back(&w).unwrap(), w);
        let there = ChartMap::p_to_adapted().pull_back(&w).unwrap();
        let back = ChartMap::adapted_to_p().pull_back(&there).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn singular_map_rejected() {
        let r = ChartMap::new(
            Chart::P,
            Chart::MAdapted,
            [(Coord::Q, int(0)), (Coord::Gamma, int(0))],
        );
        assert!(matches!(r, Err(FormError::SingularChartMap)));
    }
}
