//! Coordinates, charts and opaque-function jet symbols.
//!
//! Every symbol is a small `Copy` value whose derived ordering is the global
//! variable order used by the polynomial kernel: opaque jets first (by name,
//! argument set, then derivative multi-index), then coordinates in
//! alphabetical order. The order depends only on symbol content, so canonical
//! forms are reproducible across processes without any interning table.

use std::collections::BTreeMap;
use std::fmt;

use super::ExprError;

/// A chart coordinate. The variant order is the variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Alpha,
    Gamma,
    P,
    Q,
    T,
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 8] = [
        Coord::Alpha,
        Coord::Gamma,
        Coord::P,
        Coord::Q,
        Coord::T,
        Coord::X,
        Coord::Y,
        Coord::Z,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coord::Alpha => "alpha",
            Coord::Gamma => "gamma",
            Coord::P => "p",
            Coord::Q => "q",
            Coord::T => "t",
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Option<Coord> {
        match name {
            "alpha" | "α" => Some(Coord::Alpha),
            "gamma" | "γ" => Some(Coord::Gamma),
            "p" => Some(Coord::P),
            "q" => Some(Coord::Q),
            "t" => Some(Coord::T),
            "x" => Some(Coord::X),
            "y" => Some(Coord::Y),
            "z" => Some(Coord::Z),
            _ => None,
        }
    }

    #[inline]
    pub(crate) fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The three coordinate patches the pipeline works on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Second jet space `(x, y, p, q)`.
    J2,
    /// The six-dimensional bundle `(x, y, p, q, alpha, gamma)`.
    P,
    /// Adapted coordinates `(x, y, z, t, alpha, p)` with `z = gamma/p`, `t = q/p + gamma`.
    MAdapted,
}

impl Chart {
    pub fn coords(self) -> &'static [Coord] {
        match self {
            Chart::J2 => &[Coord::X, Coord::Y, Coord::P, Coord::Q],
            Chart::P => &[
                Coord::X,
                Coord::Y,
                Coord::P,
                Coord::Q,
                Coord::Alpha,
                Coord::Gamma,
            ],
            Chart::MAdapted => &[
                Coord::X,
                Coord::Y,
                Coord::Z,
                Coord::T,
                Coord::Alpha,
                Coord::P,
            ],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chart::J2 => "J2",
            Chart::P => "P",
            Chart::MAdapted => "M-adapted",
        }
    }

    pub fn dim(self) -> usize {
        self.coords().len()
    }

    pub fn position(self, c: Coord) -> Option<usize> {
        self.coords().iter().position(|&k| k == c)
    }

    pub fn contains(self, c: Coord) -> bool {
        self.position(c).is_some()
    }

    pub fn coord_set(self) -> CoordSet {
        self.coords().iter().copied().collect()
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bit set of coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordSet(u8);

impl CoordSet {
    pub fn contains(self, c: Coord) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn insert(&mut self, c: Coord) {
        self.0 |= c.bit();
    }

    pub fn is_subset(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Coord> {
        Coord::ALL.into_iter().filter(move |c| self.contains(*c))
    }
}

impl FromIterator<Coord> for CoordSet {
    fn from_iter<I: IntoIterator<Item = Coord>>(iter: I) -> Self {
        let mut s = CoordSet::default();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

/// Name of an opaque function: 1 to 8 ASCII alphanumerics starting with a letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnName([u8; 8]);

impl FnName {
    pub const MAX_LEN: usize = 8;

    pub fn new(name: &str) -> Result<FnName, ExprError> {
        let bytes = name.as_bytes();
        let valid = !bytes.is_empty()
            && bytes.len() <= Self::MAX_LEN
            && bytes[0].is_ascii_alphabetic()
            && bytes.iter().all(|b| b.is_ascii_alphanumeric());
        if !valid || Coord::from_name(name).is_some() {
            return Err(ExprError::InvalidFunctionName(name.to_string()));
        }
        let mut buf = [0u8; 8];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(FnName(buf))
    }

    pub fn as_str(&self) -> &str {
        let len = self.0.iter().position(|&b| b == 0).unwrap_or(8);
        // constructed from validated ASCII
        std::str::from_utf8(&self.0[..len]).expect("ascii function name")
    }
}

impl fmt::Debug for FnName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl fmt::Display for FnName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Derivative orders, one slot per coordinate. Mixed partials commute, so
/// a count per coordinate is already the sorted multi-index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex([u8; 8]);

impl MultiIndex {
    pub fn order(&self, c: Coord) -> u8 {
        self.0[c as usize]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&k| k as u32).sum()
    }

    /// The multi-index as a sorted list of coordinates, e.g. `[x, x, y]`.
    pub fn sorted(&self) -> Vec<Coord> {
        Coord::ALL
            .iter()
            .flat_map(|&c| std::iter::repeat_n(c, self.order(c) as usize))
            .collect()
    }
}

/// A partial derivative of an opaque function, e.g. `A_x_y` for `∂²A/∂x∂y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    name: FnName,
    args: CoordSet,
    index: MultiIndex,
}

impl Jet {
    pub fn name(&self) -> FnName {
        self.name
    }

    pub fn args(&self) -> CoordSet {
        self.args
    }

    pub fn index(&self) -> MultiIndex {
        self.index
    }

    /// The underived function symbol this jet belongs to.
    pub fn base(&self) -> Jet {
        Jet {
            index: MultiIndex::default(),
            ..*self
        }
    }

    /// `∂/∂c` of this jet, or `None` when the function does not depend on `c`.
    pub fn derivative(&self, c: Coord) -> Option<Jet> {
        if !self.args.contains(c) {
            return None;
        }
        let mut index = self.index;
        index.0[c as usize] = index.0[c as usize]
            .checked_add(1)
            .expect("derivative order overflow");
        Some(Jet { index, ..*self })
    }

    /// Apply a whole multi-index of derivatives, `None` if any direction is absent.
    pub fn derivative_by(&self, idx: &MultiIndex) -> Option<Jet> {
        let mut out = *self;
        for c in idx.sorted() {
            out = out.derivative(c)?;
        }
        Some(out)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for c in self.index.sorted() {
            write!(f, "_{}", c.name())?;
        }
        Ok(())
    }
}

/// A polynomial variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Jet(Jet),
    Coord(Coord),
}

impl Symbol {
    pub fn as_coord(&self) -> Option<Coord> {
        match self {
            Symbol::Coord(c) => Some(*c),
            Symbol::Jet(_) => None,
        }
    }

    pub fn as_jet(&self) -> Option<Jet> {
        match self {
            Symbol::Jet(j) => Some(*j),
            Symbol::Coord(_) => None,
        }
    }

    /// Coordinates this symbol depends on.
    pub fn dependencies(&self) -> CoordSet {
        match self {
            Symbol::Coord(c) => std::iter::once(*c).collect(),
            Symbol::Jet(j) => j.args,
        }
    }
}

impl From<Coord> for Symbol {
    fn from(c: Coord) -> Self {
        Symbol::Coord(c)
    }
}

impl From<Jet> for Symbol {
    fn from(j: Jet) -> Self {
        Symbol::Jet(j)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Coord(c) => c.fmt(f),
            Symbol::Jet(j) => j.fmt(f),
        }
    }
}

/// A declared opaque function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpaqueFunction {
    pub name: FnName,
    pub args: Vec<Coord>,
}

impl OpaqueFunction {
    pub fn symbol(&self) -> Jet {
        Jet {
            name: self.name,
            args: self.args.iter().copied().collect(),
            index: MultiIndex::default(),
        }
    }
}

/// Append-only table of the opaque functions a parser may refer to.
#[derive(Clone, Debug, Default)]
pub struct FunctionRegistry {
    functions: BTreeMap<FnName, OpaqueFunction>,
}

impl FunctionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with `A`, `B`, `C` declared over `(x, y)`.
    pub fn with_family_functions() -> Self {
        let mut reg = Self::new();
        for name in ["A", "B", "C"] {
            reg.declare(name, &[Coord::X, Coord::Y])
                .expect("fresh registry");
        }
        reg
    }

    pub fn declare(&mut self, name: &str, args: &[Coord]) -> Result<Jet, ExprError> {
        let fname = FnName::new(name)?;
        if args.is_empty() {
            return Err(ExprError::EmptyArguments(name.to_string()));
        }
        for (i, a) in args.iter().enumerate() {
            if args[..i].contains(a) {
                return Err(ExprError::DuplicateArgument {
                    function: name.to_string(),
                    coord: a.name().to_string(),
                });
            }
        }
        if self.functions.contains_key(&fname) {
            return Err(ExprError::NameCollision(name.to_string()));
        }
        let f = OpaqueFunction {
            name: fname,
            args: args.to_vec(),
        };
        let sym = f.symbol();
        self.functions.insert(fname, f);
        Ok(sym)
    }

    pub fn get(&self, name: &str) -> Option<&OpaqueFunction> {
        FnName::new(name).ok().and_then(|n| self.functions.get(&n))
    }

    pub fn iter(&self) -> impl Iterator<Item = &OpaqueFunction> {
        self.functions.values()
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Resolve `A` or a derivative name such as `A_x_y` to a jet symbol.
    pub fn resolve_jet(&self, name: &str) -> Option<Jet> {
        let mut parts = name.split('_');
        let f = self.get(parts.next()?)?;
        let mut jet = f.symbol();
        for part in parts {
            jet = jet.derivative(Coord::from_name(part)?)?;
        }
        Some(jet)
    }
}
