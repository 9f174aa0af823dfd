use std::sync::OnceLock;

use crate::expr::{Chart, Expression};

use super::form::DifferentialForm;
use super::matrix::Matrix;
use super::FormError;

/// `n` pointwise independent 1-forms on an `n`-dimensional chart.
///
/// Row `i` of the coefficient matrix holds the coordinate components of form `i`.
/// The inverse is computed on first use; its column `i` is the dual frame vector `X_i`.
#[derive(Debug)]
pub struct Coframe {
    chart: Chart,
    forms: Vec<DifferentialForm>,
    matrix: Matrix<Expression>,
    inverse: OnceLock<Option<Matrix<Expression>>>,
}

impl Clone for Coframe {
    fn clone(&self) -> Self {
        let inverse = OnceLock::new();
        if let Some(v) = self.inverse.get() {
            let _ = inverse.set(v.clone());
        }
        Coframe {
            chart: self.chart,
            forms: self.forms.clone(),
            matrix: self.matrix.clone(),
            inverse,
        }
    }
}

/// Coefficients `c_ij` (`i<j`) of a 2-form in the basis `e_i∧e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFormCoefficients {
    n: usize,
    values: Vec<Expression>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl TwoFormCoefficients {
    pub fn zero(n: usize) -> Self {
        TwoFormCoefficients {
            n,
            values: vec![Expression::zero(); n * (n - 1) / 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficient of `e_i∧e_j`, antisymmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Expression {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.values[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.values[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => Expression::zero(),
        }
    }

    /// Adds `v` to the coefficient of `e_i∧e_j` (any order).
    pub fn add_to(&mut self, i: usize, j: usize, v: &Expression) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let k = pair_index(self.n, i, j);
                self.values[k] = &self.values[k] + v;
            }
            std::cmp::Ordering::Greater => {
                let k = pair_index(self.n, j, i);
                self.values[k] = &self.values[k] - v;
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    /// `(i, j, c_ij)` for `i<j`, lexicographic.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Expression)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.values.iter())
            .map(|((i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Expression::is_zero)
    }
}

impl Coframe {
    pub fn new(forms: Vec<DifferentialForm>) -> Result<Self, FormError> {
        let chart = forms
            .first()
            .map(|f| f.chart())
            .ok_or(FormError::CoframeSize {
                expected: 1,
                found: 0,
            })?;
        if forms.len() != chart.dim() {
            return Err(FormError::CoframeSize {
                expected: chart.dim(),
                found: forms.len(),
            });
        }
        for f in &forms {
            if f.chart() != chart {
                return Err(FormError::ChartMismatch {
                    left: chart,
                    right: f.chart(),
                });
            }
            if f.degree() != 1 {
                return Err(FormError::WrongDegree {
                    expected: 1,
                    found: f.degree(),
                });
            }
        }
        let n = chart.dim();
        let matrix = Matrix::from_fn(n, n, |i, a| forms[i].component(&[a]));
        Ok(Coframe {
            chart,
            forms,
            matrix,
            inverse: OnceLock::new(),
        })
    }

    /// The coframe `e'_i = Σ_j t_ij e_j` for an invertible matrix `t`; reuses this
    /// coframe's inverse when it is already known.
    pub fn transform(&self, t: &Matrix<Expression>) -> Result<Self, FormError> {
        let n = self.len();
        let forms = (0..n)
            .map(|i| {
                let mut acc = DifferentialForm::zero(self.chart, 1);
                for j in 0..n {
                    let c = t.get(i, j);
                    if !c.is_zero() {
                        acc = &acc + &self.forms[j].scale(c);
                    }
                }
                acc
            })
            .collect();
        let out = Self::new(forms)?;
        if let Some(Some(inv)) = self.inverse.get() {
            let t_inv = t.inverse().ok_or(FormError::DegenerateCoframe)?;
            let _ = out.inverse.set(Some(inv.mul(&t_inv)));
        }
        Ok(out)
    }

    /// `dx^1, …, dx^n` of a chart.
    pub fn coordinate(chart: Chart) -> Self {
        let forms = (0..chart.dim())
            .map(|i| DifferentialForm::from_component(chart, &[i], Expression::one()))
            .collect();
        Self::new(forms).expect("coordinate coframe")
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[DifferentialForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &DifferentialForm {
        &self.forms[i]
    }

    pub fn matrix(&self) -> &Matrix<Expression> {
        &self.matrix
    }

    pub fn inverse(&self) -> Result<&Matrix<Expression>, FormError> {
        self.inverse
            .get_or_init(|| self.matrix.inverse())
            .as_ref()
            .ok_or(FormError::DegenerateCoframe)
    }

    pub fn determinant(&self) -> Expression {
        self.matrix.determinant()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.inverse().is_ok()
    }

    /// Components of the dual vector field `X_i` in the coordinate basis.
    pub fn frame_vector(&self, i: usize) -> Result<Vec<Expression>, FormError> {
        let inv = self.inverse()?;
        Ok((0..self.len()).map(|a| inv.get(a, i).clone()).collect())
    }

    /// `X_i(s)`.
    pub fn frame_derivative(&self, s: &Expression, i: usize) -> Result<Expression, FormError> {
        let inv = self.inverse()?;
        let deps = s.dependencies();
        let mut acc = Expression::zero();
        for (a, &c) in self.chart.coords().iter().enumerate() {
            let v = inv.get(a, i);
            if v.is_zero() || !deps.contains(c) {
                continue;
            }
            acc += v * &s.diff(c);
        }
        Ok(acc)
    }

    /// Matrix of `e_j(X_i)`; the identity for a genuine coframe.
    pub fn pairing(&self) -> Result<Matrix<Expression>, FormError> {
        Ok(self.matrix.mul(self.inverse()?))
    }

    fn check(&self, f: &DifferentialForm, degree: u8) -> Result<(), FormError> {
        if f.chart() != self.chart {
            return Err(FormError::ChartMismatch {
                left: f.chart(),
                right: self.chart,
            });
        }
        if f.degree() != degree {
            return Err(FormError::WrongDegree {
                expected: degree,
                found: f.degree(),
            });
        }
        Ok(())
    }

    /// Coefficients `c_i` with `f = Σ c_i e_i`.
    pub fn expand_one_form(&self, f: &DifferentialForm) -> Result<Vec<Expression>, FormError> {
        self.check(f, 1)?;
        let inv = self.inverse()?;
        let mut out = vec![Expression::zero(); self.len()];
        for (idx, v) in f.components() {
            let a = idx[0];
            for (i, o) in out.iter_mut().enumerate() {
                let m = inv.get(a, i);
                if !m.is_zero() {
                    *o += v * m;
                }
            }
        }
        Ok(out)
    }

    /// Coefficients `c_ij` with `f = Σ_{i<j} c_ij e_i∧e_j`.
    pub fn expand_two_form(&self, f: &DifferentialForm) -> Result<TwoFormCoefficients, FormError> {
        self.check(f, 2)?;
        let inv = self.inverse()?;
        let n = self.len();
        let mut out = TwoFormCoefficients::zero(n);
        for (idx, v) in f.components() {
            let (a, b) = (idx[0], idx[1]);
            for i in 0..n {
                let ai = inv.get(a, i);
                let bi = inv.get(b, i);
                if ai.is_zero() && bi.is_zero() {
                    continue;
                }
                for j in i + 1..n {
                    let aj = inv.get(a, j);
                    let bj = inv.get(b, j);
                    let mut m = Expression::zero();
                    if !ai.is_zero() && !bj.is_zero() {
                        m += ai * bj;
                    }
                    if !aj.is_zero() && !bi.is_zero() {
                        m -= aj * bi;
                    }
                    if !m.is_zero() {
                        out.add_to(i, j, &(v * &m));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ c_i e_i`.
    pub fn reconstruct_one_form(&self, c: &[Expression]) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.chart, 1);
        for (ci, e) in c.iter().zip(&self.forms) {
            if !ci.is_zero() {
                out = &out + &e.scale(ci);
            }
        }
        out
    }

    /// `Σ_{i<j} c_ij e_i∧e_j`.
    pub fn reconstruct_two_form(&self, c: &TwoFormCoefficients) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.chart, 2);
        for (i, j, v) in c.iter() {
            if !v.is_zero() {
                let w = self.forms[i].wedge(&self.forms[j]).expect("same chart");
                out = &out + &w.scale(v);
            }
        }
        out
    }
}
