//! Built-in spaces and the space expression language:
//! `l1:n`, `linf:n` (2 <= n <= 6), `hexagon`, and the composites
//! `l1(A,B)` and `linf(A,B)`.

use crate::error::{Error, Result};
use crate::exact::{frac, int, Vector};
use crate::space::PolyhedralSpace;
use crate::sums;

/// `ℓ₁ⁿ`: dual vertices are the sign vectors `(1, ±1, ..., ±1)`.
pub fn l1(n: usize) -> PolyhedralSpace {
    let duals = (0..1usize << (n - 1))
        .map(|mask| {
            let mut e = vec![int(1)];
            e.extend((0..n - 1).map(|bit| {
                if mask >> bit & 1 == 1 {
                    int(-1)
                } else {
                    int(1)
                }
            }));
            Vector::new(e)
        })
        .collect();
    PolyhedralSpace::build(format!("l1:{n}"), n, duals).expect("l1 is a valid polyhedral norm")
}

/// `ℓ∞ⁿ`: dual vertices are the coordinate functionals.
pub fn linf(n: usize) -> PolyhedralSpace {
    let duals = (0..n).map(|i| Vector::unit(n, i)).collect();
    PolyhedralSpace::build(format!("linf:{n}"), n, duals).expect("linf is a valid polyhedral norm")
}

/// A centrally symmetric hexagonal norm with rational data. Its dual ball
/// has vertices `±(1,0)`, `±(1/2,1)`, `±(1/2,-1)`; the unit ball has
/// vertices `±(1,1/2)`, `±(1,-1/2)`, `±(0,1)`. This is not the regular
/// hexagon, which would need irrational coordinates.
pub fn hexagon() -> PolyhedralSpace {
    let duals = vec![
        Vector::new(vec![int(1), int(0)]),
        Vector::new(vec![frac(1, 2), int(1)]),
        Vector::new(vec![frac(1, 2), int(-1)]),
    ];
    PolyhedralSpace::build("hexagon", 2, duals).expect("hexagon is a valid polyhedral norm")
}

/// The double pyramid over [`hexagon`] in dimension 3: dual vertices
/// `(f, 1)` for the six signed hexagon duals `f`.
pub fn hexagonal_bipyramid() -> PolyhedralSpace {
    let hex = hexagon();
    let duals = hex
        .signed_duals()
        .map(|f| hex.functional(f).concat(&Vector::new(vec![int(1)])))
        .collect();
    PolyhedralSpace::build("bipyramid", 3, duals).expect("bipyramid is a valid polyhedral norm")
}

/// `linf(bipyramid, linf:2)` in dimension 5. An equator vertex of the
/// bipyramid paired with a square vertex has 6 supporting functionals,
/// while an edge joining an apex to the equator, times a square edge,
/// carries 7 active functionals; vertices are therefore not strictly
/// dominant.
pub fn prism_ball() -> PolyhedralSpace {
    sums::sum_linf(&hexagonal_bipyramid(), &linf(2))
        .expect("prism ball is a valid polyhedral norm")
        .with_name("prism-ball")
}

/// Names accepted by [`parse_space`] that need no arguments.
pub fn catalog_names() -> Vec<String> {
    let mut names = vec!["hexagon".to_string()];
    for n in 2..=6 {
        names.push(format!("l1:{n}"));
    }
    for n in 2..=6 {
        names.push(format!("linf:{n}"));
    }
    names
}

/// Parses a space expression such as `l1(linf:2,hexagon)`.
pub fn parse_space(expr: &str) -> Result<PolyhedralSpace> {
    let mut parser = Parser { text: expr, pos: 0 };
    let space = parser.expr()?;
    parser.skip_ws();
    if parser.pos != expr.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(space)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: format!("{message} in space expression {:?}", self.text),
        }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PolyhedralSpace> {
        self.skip_ws();
        let start = self.pos;
        let ident: String = self.text[self.pos..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect();
        self.pos += ident.len();
        match ident.as_str() {
            "hexagon" => Ok(hexagon()),
            "l1" | "linf" if self.eat("(") => {
                let left = self.expr()?;
                if !self.eat(",") {
                    return Err(self.error("expected ','"));
                }
                let right = self.expr()?;
                if !self.eat(")") {
                    return Err(self.error("expected ')'"));
                }
                let name = self.text[start..self.pos].trim().to_string();
                let sum = if ident == "l1" {
                    sums::sum_l1(&left, &right)?
                } else {
                    sums::sum_linf(&left, &right)?
                };
                Ok(sum.with_name(name))
            }
            "l1" | "linf" if self.eat(":") => {
                let digits: String = self.text[self.pos..]
                    .chars()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                let n: usize = digits
                    .parse()
                    .map_err(|_| self.error("expected a dimension"))?;
                if !(2..=6).contains(&n) {
                    return Err(self.error("catalog dimension must be between 2 and 6"));
                }
                self.pos += digits.len();
                Ok(if ident == "l1" { l1(n) } else { linf(n) })
            }
            _ => {
                self.pos = start;
                Err(Error::UnknownSpace(self.text.to_string()))
            }
        }
    }
}
