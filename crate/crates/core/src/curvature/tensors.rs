use num_rational::BigRational;

use crate::expr::{frac, Expression};
use crate::forms::Matrix;

use super::metric::{Metric4, M_COORDS};
use super::Check;

const N: usize = 4;

fn idx3(i: usize, j: usize, k: usize) -> usize {
    (i * N + j) * N + k
}

fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * N + j) * N + k) * N + l
}

/// Levi-Civita data of a metric on `M`.
///
/// `Γ^i_jk = ½ g^il (∂_k g_lj + ∂_j g_lk − ∂_l g_jk)`,
/// `R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ^i_km Γ^m_lj − Γ^i_lm Γ^m_kj`,
/// `Ric_ij = R^k_ikj`, `R = g^ij Ric_ij`, and `W_abcd` the fully lowered Weyl tensor.
#[derive(Clone, Debug)]
pub struct CurvatureTensors {
    christoffel: Vec<Expression>,
    riemann: Vec<Expression>,
    ricci: Matrix<Expression>,
    scalar: Expression,
    weyl: Vec<Expression>,
}

impl CurvatureTensors {
    /// `Γ^i_jk`.
    pub fn christoffel(&self, i: usize, j: usize, k: usize) -> &Expression {
        &self.christoffel[idx3(i, j, k)]
    }

    /// `R^i_jkl`.
    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> &Expression {
        &self.riemann[idx4(i, j, k, l)]
    }

    pub fn ricci(&self) -> &Matrix<Expression> {
        &self.ricci
    }

    pub fn scalar(&self) -> &Expression {
        &self.scalar
    }

    /// `W_abcd`.
    pub fn weyl(&self, a: usize, b: usize, c: usize, d: usize) -> &Expression {
        &self.weyl[idx4(a, b, c, d)]
    }

    pub fn is_flat(&self) -> bool {
        self.riemann.iter().all(Expression::is_zero)
    }

    /// `R^i_jkl + R^i_jlk`.
    pub fn riemann_antisymmetry(&self) -> Check {
        let mut c = Check::new("Riemann antisymmetry");
        for (i, j, k, l) in quadruples() {
            if k < l {
                c.push(
                    format!("R^{i}_{j}{k}{l}+R^{i}_{j}{l}{k}"),
                    self.riemann(i, j, k, l) + self.riemann(i, j, l, k),
                );
            }
        }
        c
    }

    /// `R^i_jkl + R^i_klj + R^i_ljk`.
    pub fn first_bianchi(&self) -> Check {
        let mut c = Check::new("first Bianchi identity");
        for (i, j, k, l) in quadruples() {
            if j < k && k < l {
                let s =
                    self.riemann(i, j, k, l) + self.riemann(i, k, l, j) + self.riemann(i, l, j, k);
                c.push(format!("R^{i}_[{j}{k}{l}]"), s);
            }
        }
        c
    }

    pub fn ricci_symmetry(&self) -> Check {
        let mut c = Check::new("Ricci symmetry");
        for i in 0..N {
            for j in i + 1..N {
                c.push(
                    format!("Ric_{i}{j}-Ric_{j}{i}"),
                    self.ricci.get(i, j) - self.ricci.get(j, i),
                );
            }
        }
        c
    }

    /// Contractions of `W_abcd` with `g^..` over the index pairs (a,c), (a,d),
    /// (b,c), (b,d).
    pub fn weyl_traces(&self, g: &Metric4) -> Check {
        let gi = g.inverse();
        let mut c = Check::new("Weyl trace-free");
        let pairs: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 2), (1, 3)];
        for (p, q) in pairs {
            for u in 0..N {
                for v in 0..N {
                    let mut acc = Expression::zero();
                    for s in 0..N {
                        for r in 0..N {
                            let gsr = gi.get(s, r);
                            if gsr.is_zero() {
                                continue;
                            }
                            let mut ix = [0usize; 4];
                            ix[p] = s;
                            ix[q] = r;
                            let free: Vec<usize> = (0..4).filter(|x| *x != p && *x != q).collect();
                            ix[free[0]] = u;
                            ix[free[1]] = v;
                            acc += gsr * self.weyl(ix[0], ix[1], ix[2], ix[3]);
                        }
                    }
                    c.push(format!("tr{p}{q} W[{u}{v}]"), acc);
                }
            }
        }
        c
    }
}

fn quadruples() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..N).flat_map(|i| {
        (0..N).flat_map(move |j| (0..N).flat_map(move |k| (0..N).map(move |l| (i, j, k, l))))
    })
}

pub fn curvature_tensors(g: &Metric4) -> CurvatureTensors {
    let gm = g.components();
    let gi = g.inverse();
    // dg[l][j][k] = ∂_k g_lj
    let dg: Vec<Expression> = (0..N * N * N)
        .map(|n| {
            let (l, j, k) = (n / 16, (n / 4) % 4, n % 4);
            gm.get(l, j).diff(M_COORDS[k])
        })
        .collect();
    let mut christoffel = vec![Expression::zero(); N * N * N];
    for i in 0..N {
        for j in 0..N {
            for k in j..N {
                let mut acc = Expression::zero();
                for l in 0..N {
                    let gil = gi.get(i, l);
                    if gil.is_zero() {
                        continue;
                    }
                    let s = &(&dg[idx3(l, j, k)] + &dg[idx3(l, k, j)]) - &dg[idx3(j, k, l)];
                    if !s.is_zero() {
                        acc += gil * &s;
                    }
                }
                let v = frac(1, 2) * acc;
                christoffel[idx3(i, k, j)] = v.clone();
                christoffel[idx3(i, j, k)] = v;
            }
        }
    }
    let gam = |i: usize, j: usize, k: usize| &christoffel[idx3(i, j, k)];
    let mut riemann = vec![Expression::zero(); N * N * N * N];
    for (i, j, k, l) in quadruples() {
        let mut acc = gam(i, l, j).diff(M_COORDS[k]) - gam(i, k, j).diff(M_COORDS[l]);
        for m in 0..N {
            let (a, b) = (gam(i, k, m), gam(m, l, j));
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
            let (a, b) = (gam(i, l, m), gam(m, k, j));
            if !a.is_zero() && !b.is_zero() {
                acc -= a * b;
            }
        }
        riemann[idx4(i, j, k, l)] = acc;
    }
    let ricci = Matrix::from_fn(N, N, |i, j| {
        (0..N).fold(Expression::zero(), |acc, k| {
            acc + &riemann[idx4(k, i, k, j)]
        })
    });
    let mut scalar = Expression::zero();
    for i in 0..N {
        for j in 0..N {
            let gij = gi.get(i, j);
            if !gij.is_zero() {
                scalar += gij * ricci.get(i, j);
            }
        }
    }
    // R_abcd = g_ai R^i_bcd
    let lowered: Vec<Expression> = (0..N * N * N * N)
        .map(|n| {
            let (a, b, c, d) = (n / 64, (n / 16) % 4, (n / 4) % 4, n % 4);
            (0..N).fold(Expression::zero(), |acc, i| {
                let gai = gm.get(a, i);
                let r = &riemann[idx4(i, b, c, d)];
                if gai.is_zero() || r.is_zero() {
                    acc
                } else {
                    acc + gai * r
                }
            })
        })
        .collect();
    let sixth = &scalar * &frac(1, 6);
    let weyl = (0..N * N * N * N)
        .map(|n| {
            let (a, b, c, d) = (n / 64, (n / 16) % 4, (n / 4) % 4, n % 4);
            let g = |i: usize, j: usize| gm.get(i, j);
            let r = |i: usize, j: usize| ricci.get(i, j);
            let ric_part =
                g(a, c) * r(b, d) - g(a, d) * r(b, c) - g(b, c) * r(a, d) + g(b, d) * r(a, c);
            let g_part = g(a, c) * g(b, d) - g(a, d) * g(b, c);
            &lowered[n] - &(frac(1, 2) * ric_part) + &sixth * &g_part
        })
        .collect();
    CurvatureTensors {
        christoffel,
        riemann,
        ricci,
        scalar,
        weyl,
    }
}

/// `Ric_ij − Λ g_ij`; with `Λ = −1` this is `Ric + G`.
pub fn einstein_residual(
    g: &Metric4,
    ct: &CurvatureTensors,
    lambda: &BigRational,
) -> Matrix<Expression> {
    let l = Expression::from_rational(lambda.clone());
    Matrix::from_fn(N, N, |i, j| ct.ricci().get(i, j) - &(&l * g.get(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::FamilyData;
    use crate::curvature::metric_from_family;
    use crate::expr::int;

    #[test]
    fn flat_metric_has_no_curvature() {
        let g = Metric4::flat();
        let ct = curvature_tensors(&g);
        assert!(ct.christoffel.iter().all(Expression::is_zero));
        assert!(ct.is_flat());
        let res = einstein_residual(&g, &ct, &BigRational::from_integer((-1).into()));
        assert_eq!(&res, g.components());
    }

    #[test]
    fn family_metric_is_einstein() {
        let g = metric_from_family(&FamilyData::opaque()).unwrap().metric;
        let ct = curvature_tensors(&g);
        assert!(einstein_residual(&g, &ct, &BigRational::from_integer((-1).into())).is_zero());
        assert_eq!(ct.scalar(), &int(-4));
        assert!(ct.riemann_antisymmetry().holds());
        assert!(ct.first_bianchi().holds());
        assert!(ct.ricci_symmetry().holds());
        assert!(ct.weyl_traces(&g).holds());
    }
}
