use crate::cartan::{
    family_invariants, invariant_coframe, FamilyData, FamilyInvariants, OdeProblem, TauBasis,
};
use crate::expr::{frac, int, Chart, Expression, FunctionRegistry};
use crate::forms::{ChartMap, DifferentialForm, Matrix};

use super::metric::metric_from_family;
use super::tensors::curvature_tensors;
use super::{Check, CurvatureError};

type FormMatrix = Vec<Vec<DifferentialForm>>;

/// `(τ¹..τ⁴, Γ₁, Γ₂)` of a family member on `(x, y, z, t, α, p)` together
/// with its `k, n, e`.
#[derive(Clone, Debug)]
pub struct FamilyFrame {
    pub basis: TauBasis,
    pub invariants: FamilyInvariants,
}

impl FamilyFrame {
    fn tau(&self, i: usize) -> &DifferentialForm {
        self.basis.tau(i)
    }

    fn wedge(&self, i: usize, j: usize) -> DifferentialForm {
        self.tau(i).wedge(self.tau(j)).expect("same chart")
    }
}

pub fn family_frame(fd: &FamilyData) -> Result<FamilyFrame, CurvatureError> {
    let prob = OdeProblem::new(fd.rhs(), FunctionRegistry::new())?;
    let cf = invariant_coframe(&prob)?;
    let basis = crate::cartan::tau_basis(&cf)?.pull_back(&ChartMap::p_to_adapted())?;
    Ok(FamilyFrame {
        basis,
        invariants: family_invariants(fd),
    })
}

fn zero1() -> DifferentialForm {
    DifferentialForm::zero(Chart::MAdapted, 1)
}

fn zero2() -> DifferentialForm {
    DifferentialForm::zero(Chart::MAdapted, 2)
}

/// `dA + A∧A` for a square matrix of 1-forms.
fn curvature_of(a: &FormMatrix) -> FormMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = a[i][j].d();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !a[k][j].is_zero() {
                            acc = &acc + &a[i][k].wedge(&a[k][j]).expect("same chart");
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `g_ij A^j_k + g_kj A^j_i` for every `i ≤ k`.
fn lowered_antisymmetry(
    name: &str,
    a: &FormMatrix,
    g: &Matrix<Expression>,
    basis: &TauBasis,
) -> Result<Check, CurvatureError> {
    let n = a.len();
    let low = |i: usize, k: usize| {
        (0..n).fold(zero1(), |acc, j| {
            let gij = g.get(i, j);
            if gij.is_zero() {
                acc
            } else {
                &acc + &a[j][k].scale(gij)
            }
        })
    };
    let mut c = Check::new(name);
    for i in 0..n {
        for k in i..n {
            c.push_one_form(
                &format!("({}{})", i + 1, k + 1),
                &(&low(i, k) + &low(k, i)),
                basis,
            )?;
        }
    }
    Ok(c)
}

/// `G̃_ij` in the frame `τ`: `2τ¹τ² + 2τ³τ⁴`.
fn tilde_g() -> Matrix<Expression> {
    let mut g = Matrix::zeros(4, 4);
    for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
        g.set(i, j, int(1));
    }
    g
}

/// Levi-Civita connection of `G̃` in the null frame `τ` and its curvature.
#[derive(Clone, Debug)]
pub struct ConnectionReport {
    /// `Γ^i_j`.
    pub gamma: FormMatrix,
    /// `R^i_j = dΓ^i_j + Γ^i_k∧Γ^k_j`.
    pub curvature: FormMatrix,
    /// `Ric_ij = R^k_ikj` in the frame.
    pub ricci: Matrix<Expression>,
    /// `dτ^i + Γ^i_j∧τ^j = 0`.
    pub torsion_free: Check,
    /// `Γ_(ij) = 0` with indices lowered by `G̃`.
    pub antisymmetry: Check,
    /// Every `R^i_j` against the displayed list.
    pub curvature_list: Check,
    /// `R^i_j` has no `Γ₁, Γ₂` legs.
    pub horizontal: Check,
    /// `Ric_ij + G̃_ij`.
    pub einstein: Check,
    /// Frame Ricci against the coordinate Ricci of `G` evaluated on the frame.
    pub cross_formalism: Check,
}

impl ConnectionReport {
    pub fn checks(&self) -> [&Check; 6] {
        [
            &self.torsion_free,
            &self.antisymmetry,
            &self.curvature_list,
            &self.horizontal,
            &self.einstein,
            &self.cross_formalism,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|c| c.holds())
    }
}

pub fn connection_and_curvature_on_p(fd: &FamilyData) -> Result<ConnectionReport, CurvatureError> {
    let fr = family_frame(fd)?;
    let FamilyInvariants { k, n, e } = &fr.invariants;
    let basis = &fr.basis;
    let (t1, t4) = (fr.tau(1), fr.tau(4));
    let (g1, g2) = (basis.gamma(1), basis.gamma(2));
    let half_n = frac(1, 2) * n;
    let e_minus = e - &half_n;

    let gamma: FormMatrix = vec![
        vec![-g1, zero1(), zero1(), zero1()],
        vec![
            zero1(),
            g1.clone(),
            zero1(),
            &t1.scale(&-&half_n) + &t4.scale(&e_minus),
        ],
        vec![
            &t1.scale(&half_n) - &t4.scale(&e_minus),
            zero1(),
            g2.clone(),
            zero1(),
        ],
        vec![zero1(), zero1(), zero1(), -g2],
    ];

    let mut torsion_free = Check::new("dtau + Gamma ^ tau");
    for i in 0..4 {
        let mut f = fr.tau(i + 1).d();
        for j in 0..4 {
            if !gamma[i][j].is_zero() {
                f = &f + &gamma[i][j].wedge(fr.tau(j + 1))?;
            }
        }
        torsion_free.push_two_form(&format!("T{}", i + 1), &f, basis)?;
    }

    let antisymmetry = lowered_antisymmetry("Gamma_(ij)", &gamma, &tilde_g(), basis)?;

    let curvature = curvature_of(&gamma);
    let cf = basis.coframe();
    let n1 = cf.frame_derivative(n, 0)?;
    let n4 = cf.frame_derivative(n, 3)?;
    let e1 = cf.frame_derivative(e, 0)?;
    let x = frac(1, 2) * &n4 + &e1 - frac(1, 2) * &n1;
    let half_k = frac(1, 2) * k;
    let (w12, w14, w34) = (fr.wedge(1, 2), fr.wedge(1, 4), fr.wedge(3, 4));
    let mut expected: Vec<Vec<DifferentialForm>> = vec![vec![zero2(); 4]; 4];
    expected[0][0] = -&(&w12 + &w14.scale(&half_k));
    expected[1][1] = &w12 + &w14.scale(&half_k);
    expected[1][3] = &(&w12.scale(&half_k) + &w14.scale(&x)) - &w34.scale(&half_k);
    expected[2][0] = -&expected[1][3];
    expected[2][2] = &w14.scale(&half_k) - &w34;
    expected[3][3] = -&expected[2][2];
    let mut curvature_list = Check::new("R^i_j list");
    let mut horizontal = Check::new("R^i_j horizontal");
    // rc[i][j][a][b] with R^i_j = Σ_{a<b} rc τ^a∧τ^b
    let mut rc = vec![vec![vec![vec![Expression::zero(); 4]; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let label = format!("R{}{}", i + 1, j + 1);
            curvature_list.push_two_form(&label, &(&curvature[i][j] - &expected[i][j]), basis)?;
            let coeffs = cf.expand_two_form(&curvature[i][j])?;
            let mut vertical = false;
            for (a, b, v) in coeffs.iter() {
                if a >= 4 || b >= 4 {
                    if !v.is_zero() {
                        vertical = true;
                        horizontal.push(format!("{label}[{a}{b}]"), v.clone());
                    }
                } else {
                    rc[i][j][a][b] = v.clone();
                    rc[i][j][b][a] = -v;
                }
            }
            if !vertical {
                horizontal.push(label, Expression::zero());
            }
        }
    }
    let ricci = Matrix::from_fn(4, 4, |j, l| {
        (0..4).fold(Expression::zero(), |acc, m| acc + &rc[m][j][m][l])
    });
    let gt = tilde_g();
    let mut einstein = Check::new("Ric = -G~");
    for i in 0..4 {
        for j in i..4 {
            einstein.push(
                format!("Ric{}{}+G~{}{}", i + 1, j + 1, i + 1, j + 1),
                ricci.get(i, j) + gt.get(i, j),
            );
        }
    }

    let metric = metric_from_family(fd)?.metric;
    let ct = curvature_tensors(&metric);
    let frames: Vec<Vec<Expression>> = (0..4)
        .map(|i| cf.frame_vector(i))
        .collect::<Result<_, _>>()?;
    let mut cross_formalism = Check::new("frame Ricci = coordinate Ricci");
    for i in 0..4 {
        for j in i..4 {
            let mut acc = Expression::zero();
            for a in 0..4 {
                for b in 0..4 {
                    let (u, v, r) = (&frames[i][a], &frames[j][b], ct.ricci().get(a, b));
                    if !u.is_zero() && !v.is_zero() && !r.is_zero() {
                        acc += &(u * v) * r;
                    }
                }
            }
            cross_formalism.push(format!("Ric({},{})", i + 1, j + 1), &acc - ricci.get(i, j));
        }
    }

    Ok(ConnectionReport {
        gamma,
        curvature,
        ricci,
        torsion_free,
        antisymmetry,
        curvature_list,
        horizontal,
        einstein,
        cross_formalism,
    })
}

/// The `so(2,2)`-valued Cartan connection of a family member and its curvature.
#[derive(Clone, Debug)]
pub struct CartanConnection {
    /// `ω^i_j` built from `τ, Γ₁, Γ₂`.
    pub omega: FormMatrix,
    /// `Ω = dω + ω∧ω`.
    pub curvature: FormMatrix,
    /// The constant matrix `g_ij`.
    pub g: Matrix<Expression>,
    /// `ω_ik + ω_ki = 0` with `ω_ik = g_ij ω^j_k`.
    pub so22: Check,
    /// `Ω` against `E·τ¹∧τ⁴` with the displayed matrix `E` of `k, n, e`.
    pub curvature_form: Check,
    /// `Ω` has no `Γ₁, Γ₂` legs.
    pub horizontal: Check,
    pub flat: bool,
    pub kne_zero: bool,
}

impl CartanConnection {
    pub fn all_hold(&self) -> bool {
        self.so22.holds()
            && self.curvature_form.holds()
            && self.horizontal.holds()
            && self.flat == self.kne_zero
    }
}

pub fn cartan_connection_so22(fd: &FamilyData) -> Result<CartanConnection, CurvatureError> {
    let fr = family_frame(fd)?;
    let FamilyInvariants { k, n, e } = &fr.invariants;
    let basis = &fr.basis;
    let (t1, t2, t3, t4) = (fr.tau(1), fr.tau(2), fr.tau(3), fr.tau(4));
    let (g1, g2) = (basis.gamma(1), basis.gamma(2));
    let h = frac(1, 2);
    let s = &(g1 + g2) + t4;
    let omega: FormMatrix = vec![
        vec![s.scale(&-&h), zero1(), t1.clone(), t4.scale(&-&h)],
        vec![
            zero1(),
            s.scale(&h),
            &(t3 - g2) - &t4.scale(&h),
            t2.scale(&-&h),
        ],
        vec![
            t2.scale(&h),
            t4.scale(&h),
            (&(g1 - g2) - t4).scale(&h),
            zero1(),
        ],
        vec![
            &(g2 - t3) + &t4.scale(&h),
            -t1,
            zero1(),
            (&(g2 - g1) + t4).scale(&h),
        ],
    ];
    let g = tilde_g();
    let so22 = lowered_antisymmetry("omega_(ik)", &omega, &g, basis)?;
    let curvature = curvature_of(&omega);

    let q = frac(1, 4);
    let mixed = &h * &(&(n - k) - &(int(2) * e));
    let mut ex = Matrix::zeros(4, 4);
    ex.set(0, 0, -(&h * k));
    ex.set(1, 1, &h * k);
    ex.set(1, 2, mixed.clone());
    ex.set(1, 3, -(&q * n));
    ex.set(2, 0, &q * n);
    ex.set(3, 0, -mixed);
    let w14 = fr.wedge(1, 4);
    let mut curvature_form = Check::new("Omega = E tau1^tau4");
    let mut horizontal = Check::new("Omega horizontal");
    let mut flat = true;
    for i in 0..4 {
        for j in 0..4 {
            let label = format!("Omega{}{}", i + 1, j + 1);
            flat &= curvature[i][j].is_zero();
            curvature_form.push_two_form(
                &label,
                &(&curvature[i][j] - &w14.scale(ex.get(i, j))),
                basis,
            )?;
            let coeffs = basis.coframe().expand_two_form(&curvature[i][j])?;
            let vertical: Vec<_> = coeffs
                .iter()
                .filter(|(a, b, v)| (*a >= 4 || *b >= 4) && !v.is_zero())
                .collect();
            if vertical.is_empty() {
                horizontal.push(label.clone(), Expression::zero());
            }
            for (a, b, v) in vertical {
                horizontal.push(format!("{label}[{a}{b}]"), v.clone());
            }
        }
    }
    Ok(CartanConnection {
        omega,
        curvature,
        g,
        so22,
        curvature_form,
        horizontal,
        flat,
        kne_zero: fr.invariants.all_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_family() -> FamilyData {
        FamilyData::new(Expression::zero(), Expression::zero(), Expression::zero()).unwrap()
    }

    #[test]
    fn flat_member_has_flat_cartan_connection() {
        let cc = cartan_connection_so22(&zero_family()).unwrap();
        assert!(cc.flat && cc.kne_zero);
        assert!(cc.all_hold());
    }

    #[test]
    fn flat_member_curvature_on_p() {
        let rep = connection_and_curvature_on_p(&zero_family()).unwrap();
        assert!(rep.all_hold());
        assert!(rep.curvature[1][3].is_zero());
    }
}
