use std::fmt;

use crate::expr::{int, Expression};
use crate::forms::{ChartMap, Coframe, FormError, TwoFormCoefficients};

use super::CartanError;

pub const STRUCTURE_NAMES: [&str; 13] = [
    "a", "b", "c", "e", "f", "g", "h", "k", "l", "m", "n", "r", "s",
];

/// Names of the coframe positions, `θ¹..θ⁴, Ω¹, Ω²`.
pub const COFRAME_NAMES: [&str; 6] = ["theta1", "theta2", "theta3", "theta4", "Omega1", "Omega2"];

const TH1: usize = 0;
const TH2: usize = 1;
const TH3: usize = 2;
const TH4: usize = 3;
const OM1: usize = 4;
const OM2: usize = 5;

/// The thirteen scalar invariants appearing in `dθ^i`, `dΩ^A`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureFunctions {
    values: [Expression; 13],
}

impl StructureFunctions {
    pub fn zero() -> Self {
        StructureFunctions {
            values: std::array::from_fn(|_| Expression::zero()),
        }
    }

    pub fn from_values(values: [Expression; 13]) -> Self {
        StructureFunctions { values }
    }

    pub fn get(&self, name: &str) -> Option<&Expression> {
        STRUCTURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| &self.values[i])
    }

    fn by(&self, name: &str) -> &Expression {
        self.get(name).expect("known structure function")
    }

    pub fn a(&self) -> &Expression {
        self.by("a")
    }
    pub fn b(&self) -> &Expression {
        self.by("b")
    }
    pub fn c(&self) -> &Expression {
        self.by("c")
    }
    pub fn e(&self) -> &Expression {
        self.by("e")
    }
    pub fn f(&self) -> &Expression {
        self.by("f")
    }
    pub fn g(&self) -> &Expression {
        self.by("g")
    }
    pub fn h(&self) -> &Expression {
        self.by("h")
    }
    pub fn k(&self) -> &Expression {
        self.by("k")
    }
    pub fn l(&self) -> &Expression {
        self.by("l")
    }
    pub fn m(&self) -> &Expression {
        self.by("m")
    }
    pub fn n(&self) -> &Expression {
        self.by("n")
    }
    pub fn r(&self) -> &Expression {
        self.by("r")
    }
    pub fn s(&self) -> &Expression {
        self.by("s")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Expression)> {
        STRUCTURE_NAMES.iter().copied().zip(self.values.iter())
    }

    pub fn all_zero(&self) -> bool {
        self.values.iter().all(Expression::is_zero)
    }

    /// The same functions expressed in another chart.
    pub fn pull_back(&self, map: &ChartMap) -> Result<Self, FormError> {
        let mut values = self.values.clone();
        for v in values.iter_mut() {
            *v = map.pull_back_function(v)?;
        }
        Ok(StructureFunctions { values })
    }
}

impl fmt::Display for StructureFunctions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in self.iter() {
            writeln!(f, "{name} = {v}")?;
        }
        Ok(())
    }
}

/// Right-hand sides of `dθ¹..dθ⁴, dΩ¹, dΩ²` as coefficient tables in the basis
/// `θ^i∧θ^j` (positions `θ¹..θ⁴, Ω¹, Ω²` = 0..5).
pub fn structure_pattern(sf: &StructureFunctions) -> [TwoFormCoefficients; 6] {
    let mut t: [TwoFormCoefficients; 6] = std::array::from_fn(|_| TwoFormCoefficients::zero(6));
    let one = int(1);
    let two = int(2);
    let (a, b, c, e, f) = (sf.a(), sf.b(), sf.c(), sf.e(), sf.f());

    t[0].add_to(OM1, TH1, &one);
    t[0].add_to(TH4, TH2, &one);

    t[1].add_to(OM2, TH1, &one);
    t[1].add_to(TH3, TH2, a);
    t[1].add_to(TH4, TH2, b);
    t[1].add_to(TH4, TH3, &one);

    t[2].add_to(OM2, TH2, &one);
    t[2].add_to(OM1, TH3, &-&one);
    t[2].add_to(TH3, TH2, &(&two - &(&two * c)));
    t[2].add_to(TH4, TH1, e);
    t[2].add_to(TH4, TH3, &(&two * b));

    t[3].add_to(OM1, TH4, &one);
    t[3].add_to(TH4, TH1, f);
    t[3].add_to(TH4, TH2, &(c - &two));
    t[3].add_to(TH4, TH3, a);

    t[4].add_to(OM2, TH1, &(&(&two * c) - &two));
    t[4].add_to(OM2, TH4, &-&one);
    t[4].add_to(TH1, TH2, sf.g());
    t[4].add_to(TH1, TH3, sf.h());
    t[4].add_to(TH1, TH4, sf.k());
    t[4].add_to(TH2, TH4, &-f);

    t[5].add_to(OM2, OM1, &one);
    t[5].add_to(OM2, TH3, &-a);
    t[5].add_to(OM2, TH4, &-b);
    t[5].add_to(TH1, TH2, sf.l());
    t[5].add_to(TH1, TH3, sf.m());
    t[5].add_to(TH1, TH4, sf.n());
    t[5].add_to(TH2, TH3, sf.r());
    t[5].add_to(TH2, TH4, sf.s());
    t[5].add_to(TH3, TH4, &-f);
    t
}

/// `dθ^i`, `dΩ^A` expanded in the coframe itself.
pub fn expand_differentials(cf: &Coframe) -> Result<Vec<TwoFormCoefficients>, CartanError> {
    cf.forms()
        .iter()
        .map(|w| Ok(cf.expand_two_form(&w.d())?))
        .collect()
}

/// Reads `a..s` off the expanded differentials, then checks every one of the
/// 90 coefficient slots against the structure pattern.
pub fn extract_structure_functions(cf: &Coframe) -> Result<StructureFunctions, CartanError> {
    let ex = expand_differentials(cf)?;
    let sf = read_structure_functions(&ex);
    let pattern = structure_pattern(&sf);
    for (eq, (got, want)) in ex.iter().zip(pattern.iter()).enumerate() {
        for (i, j, v) in got.iter() {
            let r = v - &want.get(i, j);
            if !r.is_zero() {
                return Err(CartanError::InconsistentStructure {
                    equation: COFRAME_NAMES[eq],
                    slot: (COFRAME_NAMES[i], COFRAME_NAMES[j]),
                    residual: r.to_string(),
                });
            }
        }
    }
    Ok(sf)
}

fn read_structure_functions(ex: &[TwoFormCoefficients]) -> StructureFunctions {
    let two = int(2);
    StructureFunctions::from_values([
        -ex[1].get(TH2, TH3),
        -ex[1].get(TH2, TH4),
        &two - &ex[3].get(TH2, TH4),
        -ex[2].get(TH1, TH4),
        -ex[3].get(TH1, TH4),
        ex[4].get(TH1, TH2),
        ex[4].get(TH1, TH3),
        ex[4].get(TH1, TH4),
        ex[5].get(TH1, TH2),
        ex[5].get(TH1, TH3),
        ex[5].get(TH1, TH4),
        ex[5].get(TH2, TH3),
        ex[5].get(TH2, TH4),
    ])
}
