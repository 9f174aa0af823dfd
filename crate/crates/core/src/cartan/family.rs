use thiserror::Error;

use crate::expr::{
    coord, frac, int, Chart, Coord, CoordSet, Expression, FnName, FunctionRegistry, Symbol,
};

use super::CartanError;

/// Why an equation is not of the form `3/2 q²/p + A p³ + C p² + B p`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyRejection {
    #[error("wrong q-dependence")]
    WrongQDependence,
    #[error("coefficient depends on p or q")]
    CoefficientDependsOnPq,
    #[error("sigma-term present: q^2 enters as 3/2 q^2/(p + sigma) with sigma = {sigma}")]
    SigmaTermPresent { sigma: String },
    #[error("p-dependence outside p, p^2, p^3 (powers {powers:?})")]
    ExtraPowersOfP { powers: Vec<u32> },
}

/// The coefficients of `F = 3/2 q²/p + A p³ + C p² + B p`, functions of `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyData {
    /// Coefficient of `p³`.
    pub a: Expression,
    /// Coefficient of `p`.
    pub b: Expression,
    /// Coefficient of `p²`.
    pub c: Expression,
}

fn xy() -> CoordSet {
    [Coord::X, Coord::Y].into_iter().collect()
}

impl FamilyData {
    pub fn new(a: Expression, b: Expression, c: Expression) -> Result<Self, FamilyRejection> {
        for e in [&a, &b, &c] {
            if !e.dependencies().is_subset(xy()) {
                return Err(FamilyRejection::CoefficientDependsOnPq);
            }
        }
        Ok(FamilyData { a, b, c })
    }

    /// Opaque `A(x,y), B(x,y), C(x,y)`.
    pub fn opaque() -> Self {
        let reg = FunctionRegistry::with_family_functions();
        let j = |n| Expression::jet(reg.resolve_jet(n).expect("declared"));
        FamilyData {
            a: j("A"),
            b: j("B"),
            c: j("C"),
        }
    }

    pub fn rhs(&self) -> Expression {
        let (p, q) = (coord(Coord::P), coord(Coord::Q));
        frac(3, 2) * q.pow(2) / p.clone() + &self.a * &p.pow(3) + &self.c * &p.pow(2) + &self.b * &p
    }

    /// Replace an opaque function throughout `A, B, C`.
    pub fn specialize(&self, name: FnName, value: &Expression) -> Result<Self, CartanError> {
        Ok(FamilyData {
            a: self.a.specialize(name, value)?,
            b: self.b.specialize(name, value)?,
            c: self.c.specialize(name, value)?,
        })
    }
}

/// Match `F` against the family; `F` must already be in the normal form with
/// `q²/p` (no `σ`).
pub fn family_detect(f: &Expression) -> Result<FamilyData, FamilyRejection> {
    let p = coord(Coord::P);
    let q = coord(Coord::Q);
    let fqq = f.diff(Coord::Q).diff(Coord::Q);
    if fqq.is_zero() || !fqq.diff(Coord::Q).is_zero() {
        return Err(FamilyRejection::WrongQDependence);
    }
    let sigma = &(int(3) / &fqq) - &p;
    if sigma.depends_on(Coord::P) || sigma.depends_on(Coord::Q) {
        return Err(FamilyRejection::WrongQDependence);
    }
    if !sigma.is_zero() {
        return Err(FamilyRejection::SigmaTermPresent {
            sigma: sigma.to_string(),
        });
    }
    let xi = f - &(frac(3, 2) * q.pow(2) / p);
    if xi.depends_on(Coord::Q) {
        return Err(FamilyRejection::WrongQDependence);
    }
    let den = xi.denominator();
    if den
        .symbols()
        .iter()
        .any(|s| !s.dependencies().is_subset(xy()))
    {
        return Err(FamilyRejection::CoefficientDependsOnPq);
    }
    let mut coefficients = [Expression::zero(), Expression::zero(), Expression::zero()];
    let mut extra = Vec::new();
    for (power, num) in xi.numerator().coefficients_in(Symbol::Coord(Coord::P)) {
        let value = Expression::from_parts(num, den.clone()).expect("nonzero denominator");
        if !value.dependencies().is_subset(xy()) {
            return Err(FamilyRejection::CoefficientDependsOnPq);
        }
        match power {
            1..=3 => coefficients[power as usize - 1] = value,
            _ => extra.push(power),
        }
    }
    if !extra.is_empty() {
        return Err(FamilyRejection::ExtraPowersOfP { powers: extra });
    }
    let [b, c, a] = coefficients;
    Ok(FamilyData { a, b, c })
}

/// `k, n, e` of the family, on the chart `(x, y, z, t, α, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyInvariants {
    pub k: Expression,
    pub n: Expression,
    pub e: Expression,
}

impl FamilyInvariants {
    pub fn chart(&self) -> Chart {
        Chart::MAdapted
    }

    pub fn all_zero(&self) -> bool {
        self.k.is_zero() && self.n.is_zero() && self.e.is_zero()
    }
}

/// `k = −C/(4α²p)`, `n = (C_y − zC − 2A_x)/(8α³p)`,
/// `e = n/2 + (tC + 2B_y − C_x)/(16α³p²)`.
pub fn family_invariants(fd: &FamilyData) -> FamilyInvariants {
    let (al, p, z, t) = (
        coord(Coord::Alpha),
        coord(Coord::P),
        coord(Coord::Z),
        coord(Coord::T),
    );
    let c = &fd.c;
    let k = -c / &(int(4) * al.pow(2) * p.clone());
    let n = (c.diff(Coord::Y) - &z * c - int(2) * fd.a.diff(Coord::X))
        / (int(8) * al.pow(3) * p.clone());
    let e = frac(1, 2) * &n
        + (&t * c + int(2) * fd.b.diff(Coord::Y) - c.diff(Coord::X))
            / (int(16) * al.pow(3) * p.pow(2));
    FamilyInvariants { k, n, e }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn j2(s: &str) -> Expression {
        parse_expression(s, Chart::J2, &FunctionRegistry::with_family_functions()).unwrap()
    }

    #[test]
    fn detects_family_members() {
        let flat = family_detect(&j2("3/2*q^2/p")).unwrap();
        assert!(flat.a.is_zero() && flat.b.is_zero() && flat.c.is_zero());
        let fam = family_detect(&j2("3/2*q^2/p + A*p^3 + C*p^2 + B*p")).unwrap();
        assert_eq!(fam, FamilyData::opaque());
        let fd = family_detect(&j2("3/2*q^2/p + x*y*p^3 + (x+y)*p/(1+x^2)")).unwrap();
        assert_eq!(fd.a, j2("x*y"));
        assert_eq!(fd.b, j2("(x+y)/(1+x^2)"));
        assert_eq!(fam.rhs(), j2("3/2*q^2/p + A*p^3 + C*p^2 + B*p"));
    }

    #[test]
    fn rejects_with_reasons() {
        assert!(matches!(
            family_detect(&j2("3/2*q^2/(p+1) + p")),
            Err(FamilyRejection::SigmaTermPresent { .. })
        ));
        assert_eq!(
            family_detect(&j2("q^2")),
            Err(FamilyRejection::WrongQDependence)
        );
        assert_eq!(
            family_detect(&j2("q^3 + y*p")),
            Err(FamilyRejection::WrongQDependence)
        );
        assert_eq!(
            family_detect(&j2("3/2*q^2/p + q")),
            Err(FamilyRejection::WrongQDependence)
        );
        assert_eq!(
            family_detect(&j2("3/2*q^2/p + p/(p+x)")),
            Err(FamilyRejection::CoefficientDependsOnPq)
        );
        assert_eq!(
            family_detect(&j2("3/2*q^2/p + p^4 + x")),
            Err(FamilyRejection::ExtraPowersOfP { powers: vec![0, 4] })
        );
    }

    #[test]
    fn invariants_formulas() {
        let fd = FamilyData::opaque();
        let inv = family_invariants(&fd);
        assert_eq!(inv.k.to_string(), "-C/(4*alpha^2*p)");
        let no_c = FamilyData::new(fd.a.clone(), fd.b.clone(), Expression::zero()).unwrap();
        assert!(family_invariants(&no_c).k.is_zero());
        let reg = FunctionRegistry::with_family_functions();
        let c_only = FamilyData::new(Expression::zero(), Expression::zero(), fd.c.clone()).unwrap();
        let n = parse_expression("(C_y - z*C)/(8*alpha^3*p)", Chart::MAdapted, &reg).unwrap();
        assert_eq!(family_invariants(&c_only).n, n);
    }
}
