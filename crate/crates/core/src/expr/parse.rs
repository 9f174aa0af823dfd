//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' nonneg-integer)?
//! base   := rational | name | name '(' namelist ')' | '(' expr ')' | '-' factor
//! ```

use num_bigint::BigInt;

use super::expression::Expression;
use super::symbol::{Chart, Coord, FunctionRegistry};
use super::ExprError;

/// Parse `text` over the coordinates of `chart` and the functions in `registry`.
pub fn parse_expression(
    text: &str,
    chart: Chart,
    registry: &FunctionRegistry,
) -> Result<Expression, ExprError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        chart,
        registry,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    chart: Chart,
    registry: &'a FunctionRegistry,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == 'α' || c == 'γ'
}

fn is_name_char(c: char) -> bool {
    is_name_start(c) || c.is_ascii_digit() || c == '_'
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !f(c)).unwrap_or(rest.len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc * self.factor()?;
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero { pos: at });
                }
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expression, ExprError> {
        let b = self.base()?;
        if self.eat('^') {
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.syntax("expected a non-negative integer exponent"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| self.syntax("exponent too large"))?;
            return Ok(b.pow(e));
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<Expression, ExprError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().expect("digits");
                Ok(Expression::from(n))
            }
            Some(c) if is_name_start(c) => self.name(),
            Some(_) => Err(self.syntax("unexpected character")),
        }
    }

    fn name(&mut self) -> Result<Expression, ExprError> {
        let at = self.pos;
        let name = self.take_while(is_name_char);
        if let Some(c) = Coord::from_name(name) {
            if !self.chart.contains(c) {
                return Err(ExprError::UnknownCoordinate {
                    coord: name.to_string(),
                    chart: self.chart.to_string(),
                });
            }
            return Ok(Expression::coord(c));
        }
        if let Some(f) = self.registry.get(name) {
            for a in &f.args {
                if !self.chart.contains(*a) {
                    return Err(ExprError::UnknownCoordinate {
                        coord: a.name().to_string(),
                        chart: self.chart.to_string(),
                    });
                }
            }
            if self.eat('(') {
                let list_at = self.pos;
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    let arg = self.take_while(is_name_char);
                    match Coord::from_name(arg) {
                        Some(c) => args.push(c),
                        None => return Err(self.syntax("expected a coordinate name")),
                    }
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.syntax("expected `,` or `)`"));
                    }
                }
                if args != f.args {
                    return Err(ExprError::Syntax {
                        pos: list_at,
                        msg: format!("`{name}` is declared with different arguments"),
                    });
                }
            }
            return Ok(Expression::jet(f.symbol()));
        }
        if let Some(j) = self.registry.resolve_jet(name) {
            return Ok(Expression::jet(j));
        }
        Err(ExprError::UnknownSymbol {
            name: name.to_string(),
            pos: at,
        })
    }
}
