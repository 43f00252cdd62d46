//! The `eval` mini-language.
//!
//! ```text
//! expr  := call | const | var
//! call  := ("sq" | "id") "(" expr ")"
//!        | ("add" | "mul") "(" expr "," expr ")"
//!        | "affine" "(" rat "," rat "," expr ")"
//!        | "const" "(" rat ")"
//! const := "const:" rat
//! var   := identifier
//! ```
//!
//! Variables are bound to `--input` specs in order of first appearance.
//! Composition is name chaining: each call evaluates its system on the
//! names produced by its arguments.

use std::fmt;

use approxsys::engines::evaluate_metric;
use approxsys::names::{constant_name, product_name, sqrt_name, AlphaName};
use approxsys::systems::builders::{add_system, affine_system, id_system, mul_system, sq_system};
use approxsys::{PrecisionSchedule, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Rat),
    Var(String),
    Sq(Box<Expr>),
    Id(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Affine(Rat, Rat, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl fmt::Display) -> Result<T, ParseError> {
        Err(ParseError(format!("at column {}: {msg}", self.pos + 1)))
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        if len == 0 || self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return self.err("expected a name");
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    fn rat(&mut self) -> Result<Rat, ParseError> {
        self.skip_ws();
        let len =
            self.rest().find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '/')).unwrap_or(self.rest().len());
        let text = &self.rest()[..len];
        match text.parse::<Rat>() {
            Ok(q) => {
                self.pos += len;
                Ok(q)
            }
            Err(_) => self.err(format!("expected a rational, found {text:?}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let name = self.ident()?;
        if name == "const" && self.rest().starts_with(':') {
            self.pos += 1;
            return Ok(Expr::Const(self.rat()?));
        }
        self.skip_ws();
        if !self.rest().starts_with('(') {
            return match name {
                "sq" | "id" | "add" | "mul" | "affine" | "const" => self.err(format!("{name} needs arguments")),
                _ => Ok(Expr::Var(name.to_string())),
            };
        }
        self.eat('(')?;
        let e = match name {
            "sq" => Expr::Sq(Box::new(self.expr()?)),
            "id" => Expr::Id(Box::new(self.expr()?)),
            "add" | "mul" => {
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                if name == "add" {
                    Expr::Add(Box::new(a), Box::new(b))
                } else {
                    Expr::Mul(Box::new(a), Box::new(b))
                }
            }
            "affine" => {
                let a = self.rat()?;
                self.eat(',')?;
                let b = self.rat()?;
                self.eat(',')?;
                Expr::Affine(a, b, Box::new(self.expr()?))
            }
            "const" => Expr::Const(self.rat()?),
            other => return self.err(format!("unknown operation {other:?}")),
        };
        self.eat(')')?;
        Ok(e)
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Variables in order of first appearance.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Sq(e) | Expr::Id(e) | Expr::Affine(_, _, e) => e.collect(out),
            Expr::Add(a, b) | Expr::Mul(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }
}

/// A `--input` spec: `rat:<p/q>[,<p/q>…]` or `sqrt:<p/q>`.
pub fn parse_input(spec: &str, schedule: &PrecisionSchedule) -> Result<AlphaName<Vec<Rat>>, ParseError> {
    let bad = |m: &str| ParseError(format!("input {spec:?}: {m}"));
    match spec.split_once(':') {
        Some(("rat", body)) => {
            let v: Result<Vec<Rat>, _> = body.split(',').map(|p| p.trim().parse::<Rat>()).collect();
            Ok(constant_name(v.map_err(|e| bad(&e.to_string()))?, schedule.clone()))
        }
        Some(("sqrt", body)) => {
            let c: Rat = body.trim().parse().map_err(|e: approxsys::rational::ParseRatError| bad(&e.to_string()))?;
            if c.is_negative() {
                return Err(bad("negative radicand"));
            }
            Ok(sqrt_name(c, schedule.clone()))
        }
        _ => Err(bad("expected rat:<p/q>[,…] or sqrt:<p/q>")),
    }
}

/// Builds the output name of `e`. Operations take scalar arguments; only a
/// bare variable may stand for a vector.
pub fn build(
    e: &Expr,
    inputs: &[(String, AlphaName<Vec<Rat>>)],
    schedule: &PrecisionSchedule,
    step_cap: u64,
) -> Result<AlphaName<Vec<Rat>>, ParseError> {
    let scalar = |x: &Expr| -> Result<AlphaName<Vec<Rat>>, ParseError> {
        let u = build(x, inputs, schedule, step_cap)?;
        if let Expr::Var(v) = x {
            if let Some(w) = u.witness() {
                if w.len() != 1 {
                    return Err(ParseError(format!("variable {v} is bound to a vector; operations take scalars")));
                }
            }
        }
        Ok(u)
    };
    let sch = schedule.clone();
    Ok(match e {
        Expr::Const(q) => constant_name(vec![q.clone()], sch),
        Expr::Var(v) => inputs
            .iter()
            .find(|(n, _)| n == v)
            .map(|(_, u)| u.clone())
            .ok_or_else(|| ParseError(format!("unbound variable {v}")))?,
        Expr::Sq(x) => evaluate_metric(&sq_system(sch), &scalar(x)?, step_cap),
        Expr::Id(x) => evaluate_metric(&id_system(sch), &scalar(x)?, step_cap),
        Expr::Affine(a, b, x) => evaluate_metric(&affine_system(a.clone(), b.clone(), sch), &scalar(x)?, step_cap),
        Expr::Add(a, b) => evaluate_metric(&add_system(sch), &product_name(&[scalar(a)?, scalar(b)?]), step_cap),
        Expr::Mul(a, b) => evaluate_metric(&mul_system(sch), &product_name(&[scalar(a)?, scalar(b)?]), step_cap),
    })
}
