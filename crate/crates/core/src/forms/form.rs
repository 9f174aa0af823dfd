use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::expr::{Chart, Coord, Expression};

use super::FormError;

/// A blade `dx^{i1}∧…∧dx^{ik}` with `i1<…<ik`, stored as a bit mask of chart positions.
pub type Blade = u8;

/// Chart positions of a blade in increasing order.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..8).filter(|i| b & (1 << i) != 0).collect()
}

fn blade_of(indices: &[usize]) -> Option<(Blade, i32)> {
    let mut mask: Blade = 0;
    let mut sign = 1;
    for &i in indices {
        let bit = 1u8 << i;
        if mask & bit != 0 {
            return None;
        }
        if (mask >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// Sign of `a ∧ b` relative to the sorted blade, or `None` if they overlap.
fn wedge_sign(a: Blade, b: Blade) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// A differential form on a chart, with zero coefficients never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    chart: Chart,
    degree: u8,
    terms: BTreeMap<Blade, Expression>,
}

impl DifferentialForm {
    pub fn zero(chart: Chart, degree: u8) -> Self {
        DifferentialForm {
            chart,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(chart: Chart, f: Expression) -> Self {
        let mut out = Self::zero(chart, 0);
        out.insert(0, f);
        out
    }

    /// `dc` for a chart coordinate `c`.
    pub fn differential(chart: Chart, c: Coord) -> Result<Self, FormError> {
        let i = chart
            .position(c)
            .ok_or(FormError::CoordinateNotInChart { coord: c, chart })?;
        let mut out = Self::zero(chart, 1);
        out.insert(1 << i, Expression::one());
        Ok(out)
    }

    /// `Σ f_c dc`.
    pub fn one_form(
        chart: Chart,
        coefficients: impl IntoIterator<Item = (Coord, Expression)>,
    ) -> Result<Self, FormError> {
        let mut out = Self::zero(chart, 1);
        for (c, f) in coefficients {
            let i = chart
                .position(c)
                .ok_or(FormError::CoordinateNotInChart { coord: c, chart })?;
            out.accumulate(1 << i, f);
        }
        Ok(out)
    }

    /// Coefficient of `dx^{i1}∧…` for arbitrary (unsorted) chart positions.
    pub fn from_component(chart: Chart, indices: &[usize], f: Expression) -> Self {
        let mut out = Self::zero(chart, indices.len() as u8);
        if let Some((mask, sign)) = blade_of(indices) {
            out.accumulate(mask, if sign < 0 { -f } else { f });
        }
        out
    }

    fn insert(&mut self, b: Blade, f: Expression) {
        if f.is_zero() {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, f);
        }
    }

    fn accumulate(&mut self, b: Blade, f: Expression) {
        if f.is_zero() {
            return;
        }
        let v = match self.terms.remove(&b) {
            Some(old) => old + f,
            None => f,
        };
        self.insert(b, v);
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Expression)> {
        self.terms.iter().map(|(b, e)| (*b, e))
    }

    /// Nonzero components as `(sorted chart positions, coefficient)`, lexicographic.
    pub fn components(&self) -> Vec<(Vec<usize>, &Expression)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .map(|(b, e)| (blade_indices(*b), e))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Coefficient of `dx^{i1}∧…∧dx^{ik}`; the positions may be in any order.
    pub fn component(&self, indices: &[usize]) -> Expression {
        match blade_of(indices) {
            Some((mask, sign)) => {
                let v = self.terms.get(&mask).cloned().unwrap_or_default();
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
            None => Expression::zero(),
        }
    }

    /// Coefficient of the blade built from coordinates, in the given order.
    pub fn coefficient(&self, coords: &[Coord]) -> Result<Expression, FormError> {
        let idx = coords
            .iter()
            .map(|&c| {
                self.chart
                    .position(c)
                    .ok_or(FormError::CoordinateNotInChart {
                        coord: c,
                        chart: self.chart,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.component(&idx))
    }

    /// The 0-form value (zero for higher degrees).
    pub fn scalar(&self) -> Expression {
        if self.degree == 0 {
            self.terms.get(&0).cloned().unwrap_or_default()
        } else {
            Expression::zero()
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), FormError> {
        if self.chart != other.chart {
            return Err(FormError::ChartMismatch {
                left: self.chart,
                right: other.chart,
            });
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FormError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (b, f) in &other.terms {
            out.accumulate(*b, f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FormError> {
        self.try_add(&-other)
    }

    pub fn scale(&self, f: &Expression) -> Self {
        let mut out = Self::zero(self.chart, self.degree);
        if f.is_zero() {
            return out;
        }
        for (b, g) in &self.terms {
            out.insert(*b, g * f);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        if self.chart != other.chart {
            return Err(FormError::ChartMismatch {
                left: self.chart,
                right: other.chart,
            });
        }
        let degree = self.degree + other.degree;
        if degree as usize > self.chart.dim() {
            return Err(FormError::DegreeOverflow {
                degree,
                dim: self.chart.dim(),
            });
        }
        let mut acc: BTreeMap<Blade, Vec<Expression>> = BTreeMap::new();
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let v = f * g;
                    acc.entry(a | b).or_default().push(if neg { -v } else { v });
                }
            }
        }
        let mut out = Self::zero(self.chart, degree);
        for (b, vs) in acc {
            out.insert(b, vs.into_iter().sum());
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let coords = self.chart.coords();
        let mut acc: BTreeMap<Blade, Vec<Expression>> = BTreeMap::new();
        for (b, f) in &self.terms {
            let deps = f.dependencies();
            for (i, &c) in coords.iter().enumerate() {
                let bit = 1u8 << i;
                if b & bit != 0 || !deps.contains(c) {
                    continue;
                }
                let df = f.diff(c);
                if df.is_zero() {
                    continue;
                }
                let neg = (b & (bit - 1)).count_ones() % 2 == 1;
                acc.entry(b | bit)
                    .or_default()
                    .push(if neg { -df } else { df });
            }
        }
        let mut out = Self::zero(self.chart, self.degree + 1);
        for (b, vs) in acc {
            out.insert(b, vs.into_iter().sum());
        }
        out
    }

    /// Apply `f` to every coefficient.
    pub fn map_coefficients(
        &self,
        mut f: impl FnMut(&Expression) -> Result<Expression, FormError>,
    ) -> Result<Self, FormError> {
        let mut out = Self::zero(self.chart, self.degree);
        for (b, g) in &self.terms {
            out.insert(*b, f(g)?);
        }
        Ok(out)
    }
}

impl Add<&DifferentialForm> for &DifferentialForm {
    type Output = DifferentialForm;
    /// Panics on chart or degree mismatch; see [`DifferentialForm::try_add`].
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.try_add(rhs).expect("incompatible forms")
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: DifferentialForm) -> DifferentialForm {
        &self + &rhs
    }
}

impl Sub<&DifferentialForm> for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.try_sub(rhs).expect("incompatible forms")
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: DifferentialForm) -> DifferentialForm {
        &self - &rhs
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        DifferentialForm {
            chart: self.chart,
            degree: self.degree,
            terms: self.terms.iter().map(|(b, f)| (*b, -f)).collect(),
        }
    }
}

impl Neg for DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        -&self
    }
}

impl Mul<&DifferentialForm> for &Expression {
    type Output = DifferentialForm;
    fn mul(self, rhs: &DifferentialForm) -> DifferentialForm {
        rhs.scale(self)
    }
}

impl Mul<DifferentialForm> for Expression {
    type Output = DifferentialForm;
    fn mul(self, rhs: DifferentialForm) -> DifferentialForm {
        rhs.scale(&self)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let coords = self.chart.coords();
        for (n, (idx, e)) in self.components().into_iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({e})")?;
            for (k, i) in idx.iter().enumerate() {
                f.write_str(if k == 0 { "*" } else { "^" })?;
                write!(f, "d{}", coords[*i])?;
            }
        }
        Ok(())
    }
}
