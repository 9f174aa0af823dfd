use crate::expr::{frac, int, Chart, Coord, Expression};
use crate::forms::{Coframe, DifferentialForm};

use super::problem::OdeProblem;
use super::CartanError;

/// How the `ω²` coefficient inside `θ³` is read from its typeset form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theta3Reading {
    /// `γ − F_q/3`
    GammaMinusThirdFq,
    /// `(γ − 1/3)·F_q`
    GammaMinusThirdTimesFq,
}

/// Switches between the coframe that satisfies the structure equations and the
/// literal typeset variants, so both can be tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoframeVariant {
    pub theta3_reading: Theta3Reading,
    /// `θ³` prefactor `F_qq/(36α)` instead of `F_qq²/(36α)`.
    pub literal_theta3_scale: bool,
    /// `Ω¹` vertical part `−(γ/α) dα` instead of `dα/α − γ ω⁴`.
    pub literal_omega1: bool,
}

impl CoframeVariant {
    /// The coframe whose exterior derivatives close on the structure equations.
    /// The `θ³` reading `γ − F_q/3` is the only one that does: with `(γ − 1/3)F_q`
    /// the expansion of `dθ³` leaves residuals outside the structure pattern.
    pub const CORRECTED: CoframeVariant = CoframeVariant {
        theta3_reading: Theta3Reading::GammaMinusThirdFq,
        literal_theta3_scale: false,
        literal_omega1: false,
    };

    /// Every formula exactly as typeset, with `(γ − 1/3)F_q`.
    pub const LITERAL: CoframeVariant = CoframeVariant {
        theta3_reading: Theta3Reading::GammaMinusThirdTimesFq,
        literal_theta3_scale: true,
        literal_omega1: true,
    };
}

impl Default for CoframeVariant {
    fn default() -> Self {
        Self::CORRECTED
    }
}

/// The invariant coframe `(θ¹, θ², θ³, θ⁴, Ω¹, Ω²)` on `(x, y, p, q, α, γ)`.
pub fn invariant_coframe(prob: &OdeProblem) -> Result<Coframe, CartanError> {
    invariant_coframe_with(prob, CoframeVariant::CORRECTED)
}

pub fn invariant_coframe_with(
    prob: &OdeProblem,
    variant: CoframeVariant,
) -> Result<Coframe, CartanError> {
    let chart = Chart::P;
    let [w1, w2, w3, w4] = prob.base_coframe_on(chart)?;
    let al = Expression::coord(Coord::Alpha);
    let ga = Expression::coord(Coord::Gamma);
    let d_al = DifferentialForm::differential(chart, Coord::Alpha)?;
    let d_ga = DifferentialForm::differential(chart, Coord::Gamma)?;

    let fq = prob.f_partial(&[Coord::Q]);
    let fqq = fq.diff(Coord::Q);
    let fqqq = fqq.diff(Coord::Q);
    let fqqp = fqq.diff(Coord::P);
    let fqqy = fqq.diff(Coord::Y);
    let fqy = fq.diff(Coord::Y);
    let k = prob.invariant_k();
    let kq = k.diff(Coord::Q);
    let kp = k.diff(Coord::P);
    let g2 = ga.pow(2);
    let g3 = ga.pow(3);

    let th1 = w1.scale(&al);
    let th2 = (&w2 + &w1.scale(&ga)).scale(&(frac(1, 6) * &fqq));

    let c2 = match variant.theta3_reading {
        Theta3Reading::GammaMinusThirdFq => &ga - &(frac(1, 3) * &fq),
        Theta3Reading::GammaMinusThirdTimesFq => (&ga - &frac(1, 3)) * &fq,
    };
    let th3_scale = if variant.literal_theta3_scale {
        &fqq / &(int(36) * &al)
    } else {
        fqq.pow(2) / (int(36) * &al)
    };
    let th3 = (&(&w3 + &w2.scale(&c2)) + &w1.scale(&(frac(1, 2) * &g2 + &k))).scale(&th3_scale);

    let th4 = w4.scale(&(int(6) * &al / &fqq));

    let om1_w1 = (-(&fqqq * &g2)
        + (frac(2, 3) * &fqqq * &fq + frac(1, 3) * fqq.pow(2) + int(2) * &fqqp) * &ga
        + &fqq * &kq
        + int(2) * &fqqq * &k
        - int(2) * &fqqy)
        / &fqq;
    let om1 = if variant.literal_omega1 {
        &w1.scale(&om1_w1) - &d_al.scale(&(&ga / &al))
    } else {
        &(&w1.scale(&om1_w1) + &d_al.scale(&(int(1) / &al))) - &w4.scale(&ga)
    };

    let sixth_al = int(1) / (int(6) * &al);
    let om2_w4 = -(&fqq * &sixth_al) * (frac(1, 2) * &g2 + frac(1, 3) * &fq * &ga + &k);
    let om2_w2 = &sixth_al
        * (frac(-1, 2) * &fqqq * &g2 + (frac(1, 3) * &fqqq * &fq + &fqqp) * &ga + &fqqq * &k
            - &fqqy);
    let om2_w1 = &sixth_al
        * (frac(-1, 2) * &fqqq * &g3
            + (frac(1, 6) * fqq.pow(2) + frac(1, 3) * &fqqq * &fq + &fqqp) * &g2
            + (&fqq * &kq - &fqqy + &fqqq * &k) * &ga
            - frac(1, 3) * &fqq * &fqy
            - &fqq * &kp
            - frac(1, 3) * &fqq * &fq * &kq
            + frac(1, 3) * fqq.pow(2) * &k);
    let om2 = &(&(&w4.scale(&om2_w4) + &w2.scale(&om2_w2)) + &w1.scale(&om2_w1))
        + &d_ga.scale(&(&fqq * &sixth_al));

    Ok(Coframe::new(vec![th1, th2, th3, th4, om1, om2])?)
}
