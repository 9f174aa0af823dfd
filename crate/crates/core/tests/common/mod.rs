//! Generators and property bodies shared by the property suite and the
//! acceptance run.

#![allow(dead_code)]

use std::collections::BTreeMap;

use fpode::expr::{
    parse_expression, BigRational, Chart, Coord, Expression, FunctionRegistry, Substitution, Symbol,
};
use fpode::forms::{ChartMap, Coframe, DifferentialForm};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

const ATOMS: [&str; 8] = ["x", "y", "p", "q", "A", "A_x", "B", "C_y"];
pub const PLAIN: usize = 4;

fn registry() -> FunctionRegistry {
    FunctionRegistry::with_family_functions()
}

pub fn parse(s: &str) -> Expression {
    parse_expression(s, Chart::J2, &registry()).unwrap()
}

/// Sum of up to four monomials with small integer coefficients, over the
/// first `atoms` entries of x, y, p, q, A, A_x, B, C_y.
pub fn poly_text_over(atoms: usize) -> impl Strategy<Value = String> {
    let mono =
        (-6i32..=6, prop::collection::vec((0..atoms, 1u32..=2), 0..3)).prop_map(|(c, fs)| {
            let mut s = format!("({c})");
            for (a, e) in fs {
                s.push_str(&format!("*{}^{e}", ATOMS[a]));
            }
            s
        });
    prop::collection::vec(mono, 1..5).prop_map(|ms| ms.join(" + "))
}

pub fn poly_text() -> impl Strategy<Value = String> {
    poly_text_over(ATOMS.len())
}

/// A rational function whose denominator can never vanish identically.
pub fn expr() -> impl Strategy<Value = Expression> {
    (poly_text(), prop::option::of(poly_text())).prop_map(|(n, d)| match d {
        Some(d) => parse(&format!("({n})/(({d})^2 + 1)")),
        None => parse(&n),
    })
}

/// Polynomial coefficients only, for the form suites where sizes multiply.
pub fn small_expr() -> impl Strategy<Value = Expression> {
    poly_text().prop_map(|s| parse(&s))
}

pub fn coord_of(i: usize) -> Coord {
    Chart::J2.coords()[i]
}

pub fn form_on(chart: Chart, degree: usize) -> impl Strategy<Value = DifferentialForm> {
    let slots: Vec<usize> = (0..chart.dim()).collect();
    prop::collection::vec(
        (prop::sample::subsequence(slots, degree), small_expr()),
        1..3,
    )
    .prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(idx, f)| DifferentialForm::from_component(chart, &idx, f))
            .fold(DifferentialForm::zero(chart, degree as u8), |acc, t| {
                acc.try_add(&t).unwrap()
            })
    })
}

pub fn form(degree: usize) -> impl Strategy<Value = DifferentialForm> {
    form_on(Chart::J2, degree)
}

pub fn any_form() -> impl Strategy<Value = DifferentialForm> {
    (0usize..=4).prop_flat_map(form)
}

/// Pairs whose wedge product still has room for one more differential.
pub fn form_pair() -> impl Strategy<Value = (DifferentialForm, DifferentialForm)> {
    (0usize..=3).prop_flat_map(|k| (form(k), (0..=3 - k).prop_flat_map(form)))
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=50).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// Unit upper-triangular coframe: determinant one, so never degenerate.
pub fn coframe() -> impl Strategy<Value = Coframe> {
    prop::collection::vec(small_expr(), 6).prop_map(|entries| {
        let mut it = entries.into_iter();
        let forms = (0..4)
            .map(|i| {
                let coefficients = (0..4).filter_map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => None,
                    std::cmp::Ordering::Equal => Some((coord_of(j), Expression::one())),
                    std::cmp::Ordering::Greater => Some((coord_of(j), it.next().unwrap())),
                });
                DifferentialForm::one_form(Chart::J2, coefficients).unwrap()
            })
            .collect();
        Coframe::new(forms).unwrap()
    })
}

pub fn arithmetic_is_canonical(
    a: &Expression,
    b: &Expression,
    c: &Expression,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(a + b) - b, a.clone());
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + b, b + a);
    if !b.is_zero() {
        prop_assert_eq!(&(a * b) / b, a.clone());
    }
    prop_assert!((a - a.clone()).is_zero());
    Ok(())
}

pub fn rendering_reparses(a: &Expression) -> Result<(), TestCaseError> {
    prop_assert_eq!(&parse(&a.to_string()), a);
    Ok(())
}

pub fn derivation_rules(a: &Expression, b: &Expression, i: usize) -> Result<(), TestCaseError> {
    let c = coord_of(i);
    prop_assert_eq!((a * b).diff(c), &(&a.diff(c) * b) + &(a * &b.diff(c)));
    prop_assert_eq!((a + b).diff(c), &a.diff(c) + &b.diff(c));
    if !b.is_zero() {
        let quotient = &(&a.diff(c) * b) - &(a * &b.diff(c));
        prop_assert_eq!((a / b).diff(c), &quotient / &(b * b));
    }
    Ok(())
}

pub fn mixed_partials_commute(a: &Expression, i: usize, j: usize) -> Result<(), TestCaseError> {
    let (ci, cj) = (coord_of(i), coord_of(j));
    prop_assert_eq!(a.diff(ci).diff(cj), a.diff(cj).diff(ci));
    Ok(())
}

/// Substituting a value for x and then evaluating agrees with evaluating directly.
pub fn substitution_then_evaluation(
    a: &Expression,
    values: &[BigRational; 4],
) -> Result<(), TestCaseError> {
    let point: BTreeMap<Symbol, BigRational> = (0..4)
        .map(|i| (Symbol::Coord(coord_of(i)), values[i].clone()))
        .collect();
    let subs = Substitution::new().with(Coord::X, Expression::from_rational(values[0].clone()));
    let partial = a.subs(&subs).unwrap();
    prop_assert!(!partial.depends_on(Coord::X));
    prop_assert_eq!(
        partial.evaluate(&point).unwrap(),
        a.evaluate(&point).unwrap()
    );
    Ok(())
}

pub fn d_squared_vanishes(w: &DifferentialForm) -> Result<(), TestCaseError> {
    prop_assert!(w.d().d().is_zero());
    Ok(())
}

pub fn leibniz_rule(a: &DifferentialForm, b: &DifferentialForm) -> Result<(), TestCaseError> {
    let sign = if a.degree().is_multiple_of(2) {
        Expression::one()
    } else {
        -Expression::one()
    };
    let lhs = a.wedge(b).unwrap().d();
    let rhs = a
        .d()
        .wedge(b)
        .unwrap()
        .try_add(&a.wedge(&b.d()).unwrap().scale(&sign))
        .unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn pull_back_commutes_with_d(f: &DifferentialForm) -> Result<(), TestCaseError> {
    let map = ChartMap::p_to_adapted();
    prop_assert_eq!(
        map.pull_back(&f.d()).unwrap(),
        map.pull_back(f).unwrap().d()
    );
    Ok(())
}

pub fn coframe_expansion_round_trips(
    cf: &Coframe,
    w: &DifferentialForm,
    v: &DifferentialForm,
) -> Result<(), TestCaseError> {
    let c1 = cf.expand_one_form(w).unwrap();
    prop_assert_eq!(&cf.reconstruct_one_form(&c1), w);
    let c2 = cf.expand_two_form(v).unwrap();
    prop_assert_eq!(&cf.reconstruct_two_form(&c2), v);
    Ok(())
}

pub fn frame_and_coframe_are_dual(cf: &Coframe) -> Result<(), TestCaseError> {
    for i in 0..4 {
        let x = cf.frame_vector(i).unwrap();
        for j in 0..4 {
            let pairing: Expression = (0..4).map(|k| &cf.form(j).component(&[k]) * &x[k]).sum();
            let expected = if i == j {
                Expression::one()
            } else {
                Expression::zero()
            };
            prop_assert_eq!(pairing, expected);
            // X_i applied to the j-th coordinate function is the j-th component of X_i
            let xj = Expression::coord(coord_of(j));
            prop_assert_eq!(cf.frame_derivative(&xj, i).unwrap(), x[j].clone());
        }
    }
    Ok(())
}
