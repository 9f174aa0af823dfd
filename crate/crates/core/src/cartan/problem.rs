use crate::expr::{frac, parse_expression, Chart, Coord, Expression, FunctionRegistry};
use crate::forms::DifferentialForm;

use super::CartanError;

/// The equation `y''' = F(x, y, p, q)` with `p = y'`, `q = y''`.
#[derive(Clone, Debug)]
pub struct OdeProblem {
    f: Expression,
    registry: FunctionRegistry,
}

impl OdeProblem {
    /// Fails if `F` involves anything outside `(x, y, p, q)` or if `F_qq ≡ 0`.
    pub fn new(f: Expression, registry: FunctionRegistry) -> Result<Self, CartanError> {
        let deps = f.dependencies();
        if !deps.is_subset(Chart::J2.coord_set()) {
            let c = deps
                .iter()
                .find(|c| !Chart::J2.contains(*c))
                .expect("non-subset has an outside coordinate");
            return Err(CartanError::NotOnJetSpace(c));
        }
        if f.diff(Coord::Q).diff(Coord::Q).is_zero() {
            return Err(CartanError::DegenerateFqq);
        }
        Ok(OdeProblem { f, registry })
    }

    pub fn parse(text: &str, registry: FunctionRegistry) -> Result<Self, CartanError> {
        let f = parse_expression(text, Chart::J2, &registry)?;
        Self::new(f, registry)
    }

    /// `F = 3/2 q²/p`.
    pub fn flat_model() -> Self {
        let f = frac(3, 2) * Expression::coord(Coord::Q).pow(2) / Expression::coord(Coord::P);
        Self::new(f, FunctionRegistry::new()).expect("flat model is admissible")
    }

    /// `F = 3/2 q²/p + A p³ + C p² + B p` with opaque `A, B, C` of `(x, y)`.
    pub fn family() -> Self {
        let reg = FunctionRegistry::with_family_functions();
        Self::parse("3/2*q^2/p + A*p^3 + C*p^2 + B*p", reg).expect("family is admissible")
    }

    pub fn rhs(&self) -> &Expression {
        &self.f
    }

    pub fn registry(&self) -> &FunctionRegistry {
        &self.registry
    }

    /// Partial derivative of `F` along the given coordinates, in order.
    pub fn f_partial(&self, coords: &[Coord]) -> Expression {
        coords.iter().fold(self.f.clone(), |e, &c| e.diff(c))
    }

    /// `K = (F_qx + p F_qy + q F_qp + F F_qq)/6 − F_q²/9 − F_p/2`.
    pub fn invariant_k(&self) -> Expression {
        let (p, q) = (Expression::coord(Coord::P), Expression::coord(Coord::Q));
        let fq = self.f.diff(Coord::Q);
        let inner = fq.diff(Coord::X)
            + &p * &fq.diff(Coord::Y)
            + &q * &fq.diff(Coord::P)
            + &self.f * &fq.diff(Coord::Q);
        frac(1, 6) * inner - frac(1, 9) * fq.pow(2) - frac(1, 2) * self.f.diff(Coord::P)
    }

    /// `ω¹ = dy − p dx`, `ω² = dp − q dx`, `ω³ = dq − F dx`, `ω⁴ = dx` on `chart`
    /// (the jet space or any chart containing it).
    pub fn base_coframe_on(&self, chart: Chart) -> Result<[DifferentialForm; 4], CartanError> {
        let d = |c| DifferentialForm::differential(chart, c);
        let (p, q) = (Expression::coord(Coord::P), Expression::coord(Coord::Q));
        let dx = d(Coord::X)?;
        Ok([
            &d(Coord::Y)? - &dx.scale(&p),
            &d(Coord::P)? - &dx.scale(&q),
            &d(Coord::Q)? - &dx.scale(&self.f),
            dx,
        ])
    }

    pub fn base_coframe(&self) -> [DifferentialForm; 4] {
        self.base_coframe_on(Chart::J2).expect("jet chart")
    }
}
