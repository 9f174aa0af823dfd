use crate::expr::{frac, int, Expression};
use crate::forms::{ChartMap, Coframe, DifferentialForm, Matrix, TwoFormCoefficients};

use super::structure::StructureFunctions;
use super::CartanError;

/// Names of the positions `τ¹..τ⁴, Γ₁, Γ₂`.
pub const TAU_NAMES: [&str; 6] = ["tau1", "tau2", "tau3", "tau4", "Gamma1", "Gamma2"];

pub const T1: usize = 0;
pub const T2: usize = 1;
pub const T3: usize = 2;
pub const T4: usize = 3;
pub const G1: usize = 4;
pub const G2: usize = 5;

/// `τ¹ = 2θ¹+θ⁴, τ² = Ω², τ³ = Ω²+2θ³, τ⁴ = θ⁴, Γ₁ = Ω¹, Γ₂ = Ω¹+2θ²`.
pub fn tau_matrix() -> Matrix<Expression> {
    let rows: [[i64; 6]; 6] = [
        [2, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 2, 0, 0, 1],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 2, 0, 0, 1, 0],
    ];
    Matrix::from_fn(6, 6, |i, j| int(rows[i][j]))
}

/// The basis `(τ¹, τ², τ³, τ⁴, Γ₁, Γ₂)` built from an invariant coframe.
#[derive(Clone, Debug)]
pub struct TauBasis {
    coframe: Coframe,
}

impl TauBasis {
    pub fn coframe(&self) -> &Coframe {
        &self.coframe
    }

    pub fn tau(&self, i: usize) -> &DifferentialForm {
        assert!((1..=4).contains(&i), "τ index is 1..4");
        self.coframe.form(i - 1)
    }

    pub fn gamma(&self, a: usize) -> &DifferentialForm {
        assert!((1..=2).contains(&a), "Γ index is 1..2");
        self.coframe.form(3 + a)
    }

    /// The same basis on another chart.
    pub fn pull_back(&self, map: &ChartMap) -> Result<Self, CartanError> {
        let forms = self
            .coframe
            .forms()
            .iter()
            .map(|f| map.pull_back(f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TauBasis {
            coframe: Coframe::new(forms)?,
        })
    }

    /// Recover `(θ¹..θ⁴, Ω¹, Ω²)`.
    pub fn theta_coframe(&self) -> Result<Coframe, CartanError> {
        let inv = tau_matrix().inverse().expect("invertible basis change");
        Ok(self.coframe.transform(&inv)?)
    }

    /// `dτ^i`, `dΓ_A` expanded in the basis itself.
    pub fn expand_differentials(&self) -> Result<Vec<TwoFormCoefficients>, CartanError> {
        self.coframe
            .forms()
            .iter()
            .map(|w| Ok(self.coframe.expand_two_form(&w.d())?))
            .collect()
    }
}

pub fn tau_basis(cf: &Coframe) -> Result<TauBasis, CartanError> {
    Ok(TauBasis {
        coframe: cf.transform(&tau_matrix())?,
    })
}

/// Sign used for the `Γ₂∧τ¹` term of `dτ³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppendixVariant {
    /// `−¼ l Γ₂∧τ¹`, as forced by the structure equations.
    Corrected,
    /// `+¼ l Γ₂∧τ¹`, as typeset.
    Literal,
}

/// Right-hand sides of `dτ¹..dτ⁴, dΓ₁, dΓ₂` in terms of `a..s`.
pub fn appendix_tables(
    sf: &StructureFunctions,
    variant: AppendixVariant,
) -> [TwoFormCoefficients; 6] {
    let mut t: [TwoFormCoefficients; 6] = std::array::from_fn(|_| TwoFormCoefficients::zero(6));
    let h2 = frac(1, 2);
    let q4 = frac(1, 4);
    let one = int(1);
    let (a, b, c, e, f) = (sf.a(), sf.b(), sf.c(), sf.e(), sf.f());
    let (g, h, k, l, m, n, r, s) = (
        sf.g(),
        sf.h(),
        sf.k(),
        sf.l(),
        sf.m(),
        sf.n(),
        sf.r(),
        sf.s(),
    );
    let half = |x: &Expression| &h2 * x;
    let quarter = |x: &Expression| &q4 * x;
    let ls = &quarter(l) + &half(s);
    let cr = c + &quarter(r);

    // dτ¹
    t[0].add_to(G1, T1, &one);
    t[0].add_to(G1, T4, &half(c));
    t[0].add_to(G2, T4, &-half(c));
    t[0].add_to(T4, T1, &half(f));
    t[0].add_to(T4, T2, &-half(a));
    t[0].add_to(T4, T3, &half(a));

    // dτ²
    t[1].add_to(G1, T1, &quarter(l));
    t[1].add_to(G1, T2, &(&quarter(r) - &one));
    t[1].add_to(G1, T3, &-quarter(r));
    t[1].add_to(G1, T4, &-&ls);
    t[1].add_to(G2, T1, &-quarter(l));
    t[1].add_to(G2, T2, &-quarter(r));
    t[1].add_to(G2, T3, &quarter(r));
    t[1].add_to(G2, T4, &ls);
    t[1].add_to(T2, T1, &quarter(m));
    t[1].add_to(T3, T1, &-quarter(m));
    t[1].add_to(T4, T1, &-half(n));
    t[1].add_to(T3, T2, &half(a));
    t[1].add_to(T4, T2, &(&(&quarter(m) - &half(f)) + b));
    t[1].add_to(T4, T3, &(&half(f) - &quarter(m)));

    // dτ³
    t[2].add_to(G1, T1, &quarter(l));
    t[2].add_to(G1, T2, &cr);
    t[2].add_to(G1, T3, &-&cr);
    t[2].add_to(G1, T4, &-&ls);
    let g2t1 = match variant {
        AppendixVariant::Corrected => -quarter(l),
        AppendixVariant::Literal => quarter(l),
    };
    t[2].add_to(G2, T1, &g2t1);
    t[2].add_to(G2, T2, &-&cr);
    t[2].add_to(G2, T3, &(&cr - &one));
    t[2].add_to(G2, T4, &ls);
    t[2].add_to(T2, T1, &quarter(m));
    t[2].add_to(T3, T1, &-quarter(m));
    t[2].add_to(T4, T1, &(e - &half(n)));
    t[2].add_to(T3, T2, &half(a));
    t[2].add_to(T4, T2, &(&(&quarter(m) - b) - &half(f)));
    t[2].add_to(T4, T3, &(&(&(int(2) * b) + &half(f)) - &quarter(m)));

    // dτ⁴
    t[3].add_to(G1, T4, &half(c));
    t[3].add_to(G2, T4, &(&one - &half(c)));
    t[3].add_to(T4, T1, &half(f));
    t[3].add_to(T4, T2, &-half(a));
    t[3].add_to(T4, T3, &half(a));

    // dΓ₁
    t[4].add_to(G1, T1, &quarter(g));
    t[4].add_to(G1, T4, &(&half(f) - &quarter(g)));
    t[4].add_to(G2, T1, &-quarter(g));
    t[4].add_to(G2, T4, &(&quarter(g) - &half(f)));
    t[4].add_to(T2, T1, &(&(&quarter(h) + c) - &one));
    t[4].add_to(T3, T1, &-quarter(h));
    t[4].add_to(T4, T1, &-half(k));
    t[4].add_to(T4, T2, &(&quarter(h) + c));
    t[4].add_to(T4, T3, &-quarter(h));

    // dΓ₂
    t[5].add_to(G1, T1, &quarter(g));
    t[5].add_to(G1, T2, &-half(a));
    t[5].add_to(G1, T3, &half(a));
    t[5].add_to(G1, T4, &(&(b + &half(f)) - &quarter(g)));
    t[5].add_to(G2, T1, &-quarter(g));
    t[5].add_to(G2, T2, &half(a));
    t[5].add_to(G2, T3, &-half(a));
    t[5].add_to(G2, T4, &(&(&quarter(g) - b) - &half(f)));
    t[5].add_to(T2, T1, &(&quarter(h) + c));
    t[5].add_to(T3, T1, &-quarter(h));
    t[5].add_to(T4, T1, &-half(k));
    t[5].add_to(T4, T2, &(&quarter(h) + c));
    t[5].add_to(T4, T3, &(&one - &quarter(h)));
    t
}

/// The flat `so(2,2)` relations satisfied by `τ, Γ` of the flat model.
pub fn flat_tables() -> [TwoFormCoefficients; 6] {
    let mut t: [TwoFormCoefficients; 6] = std::array::from_fn(|_| TwoFormCoefficients::zero(6));
    let one = int(1);
    t[0].add_to(G1, T1, &one);
    t[1].add_to(G1, T2, &-&one);
    t[2].add_to(G2, T3, &-&one);
    t[3].add_to(G2, T4, &one);
    t[4].add_to(T1, T2, &one);
    t[5].add_to(T4, T3, &one);
    t
}

/// The reduced system once all ten conditions hold, in terms of `k, n, e`.
pub fn reduced_tables(k: &Expression, n: &Expression, e: &Expression) -> [TwoFormCoefficients; 6] {
    let mut t: [TwoFormCoefficients; 6] = std::array::from_fn(|_| TwoFormCoefficients::zero(6));
    let one = int(1);
    let half = frac(1, 2);
    t[0].add_to(G1, T1, &one);
    t[1].add_to(G1, T2, &-&one);
    t[1].add_to(T1, T4, &(&half * n));
    t[2].add_to(G2, T3, &-&one);
    t[2].add_to(T1, T4, &(&(&half * n) - e));
    t[3].add_to(G2, T4, &one);
    t[4].add_to(T1, T2, &one);
    t[4].add_to(T1, T4, &(&half * k));
    t[5].add_to(T1, T4, &(&half * k));
    t[5].add_to(T3, T4, &-&one);
    t
}

/// Residual coefficients keyed by the pair of coframe names.
pub type PairResiduals = Vec<((&'static str, &'static str), Expression)>;

/// Nonzero entries of `direct − expected`, per equation.
#[derive(Clone, Debug, PartialEq)]
pub struct TableResiduals {
    pub equations: Vec<(&'static str, PairResiduals)>,
}

impl TableResiduals {
    pub fn compare(direct: &[TwoFormCoefficients], expected: &[TwoFormCoefficients]) -> Self {
        let equations = direct
            .iter()
            .zip(expected)
            .enumerate()
            .map(|(eq, (d, x))| {
                let nonzero = d
                    .iter()
                    .filter_map(|(i, j, v)| {
                        let r = v - &x.get(i, j);
                        (!r.is_zero()).then_some(((TAU_NAMES[i], TAU_NAMES[j]), r))
                    })
                    .collect();
                (TAU_NAMES[eq], nonzero)
            })
            .collect();
        TableResiduals { equations }
    }

    pub fn all_zero(&self) -> bool {
        self.equations.iter().all(|(_, r)| r.is_empty())
    }
}

/// `dτ`, `dΓ` computed directly against the general formulas with `a..s` inserted.
pub fn verify_appendix(
    sf: &StructureFunctions,
    basis: &TauBasis,
) -> Result<TableResiduals, CartanError> {
    verify_appendix_with(sf, basis, AppendixVariant::Corrected)
}

pub fn verify_appendix_with(
    sf: &StructureFunctions,
    basis: &TauBasis,
    variant: AppendixVariant,
) -> Result<TableResiduals, CartanError> {
    let direct = basis.expand_differentials()?;
    Ok(TableResiduals::compare(
        &direct,
        &appendix_tables(sf, variant),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appendix_reduces_to_flat_relations() {
        let t = appendix_tables(&StructureFunctions::zero(), AppendixVariant::Corrected);
        let r = TableResiduals::compare(&t, &flat_tables());
        assert!(r.all_zero(), "{r:?}");
        let zero = Expression::zero();
        let r = TableResiduals::compare(&reduced_tables(&zero, &zero, &zero), &flat_tables());
        assert!(r.all_zero());
    }

    #[test]
    fn tau_matrix_is_invertible() {
        let t = tau_matrix();
        assert!(t.mul(&t.inverse().unwrap()).is_identity());
    }
}
