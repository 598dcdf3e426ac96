//! JSON, LaTeX and CSV forms of polynomials, zeta polynomials and
//! evaluated degree multisets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::{DimensionMultiset, DimensionPoly, RationalPoly, ZetaPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("malformed LaTeX at offset {pos}: {msg}")]
    Latex { pos: usize, msg: String },
}

fn json_err(msg: impl Into<String>) -> FormatError {
    FormatError::Json(msg.into())
}

// ---------------------------------------------------------------- JSON

/// Ascending coefficient strings, `"num/den"` or `"num"`.
pub fn poly_to_json(p: &RationalPoly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

fn parse_rational(v: &Value) -> Result<BigRational, FormatError> {
    match v {
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| json_err(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| json_err(format!("non-integral number {n}"))),
        other => Err(json_err(format!("expected coefficient, found {other}"))),
    }
}

pub fn poly_from_json(v: &Value) -> Result<RationalPoly, FormatError> {
    let arr = v
        .as_array()
        .ok_or_else(|| json_err("polynomial must be an array"))?;
    Ok(RationalPoly::new(
        arr.iter().map(parse_rational).collect::<Result<_, _>>()?,
    ))
}

fn dim_to_json(d: &DimensionPoly) -> Value {
    Value::Array(
        d.coeffs()
            .iter()
            .map(|c| match c.to_i64() {
                Some(i) => json!(i),
                None => json!(c.to_string()),
            })
            .collect(),
    )
}

fn dim_from_json(v: &Value) -> Result<DimensionPoly, FormatError> {
    poly_from_json(v)?
        .to_integer()
        .ok_or_else(|| json_err("dimension coefficients must be integers"))
}

/// `{"terms":[{"dim":[..],"mult":[..]},..]}` in canonical term order.
pub fn zeta_to_json(z: &ZetaPoly) -> Value {
    let terms: Vec<Value> = z
        .terms()
        .map(|(d, m)| json!({ "dim": dim_to_json(d), "mult": poly_to_json(m) }))
        .collect();
    json!({ "terms": terms })
}

pub fn zeta_from_json(v: &Value) -> Result<ZetaPoly, FormatError> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| json_err("missing \"terms\" array"))?;
    let mut z = ZetaPoly::new();
    for t in terms {
        let dim = dim_from_json(
            t.get("dim")
                .ok_or_else(|| json_err("term without \"dim\""))?,
        )?;
        let mult = poly_from_json(
            t.get("mult")
                .ok_or_else(|| json_err("term without \"mult\""))?,
        )?;
        z.add_term(dim, mult);
    }
    Ok(z)
}

pub fn zeta_from_json_str(s: &str) -> Result<ZetaPoly, FormatError> {
    let v: Value = serde_json::from_str(s).map_err(|e| json_err(e.to_string()))?;
    zeta_from_json(&v)
}

/// `{"dim": count, ..}`; counts beyond `u64` become strings.
pub fn multiset_to_json(m: &DimensionMultiset) -> Value {
    let map = m
        .iter()
        .map(|(d, c)| {
            let count = match c.to_u64() {
                Some(x) => json!(x),
                None => json!(c.to_string()),
            };
            (d.to_string(), count)
        })
        .collect();
    Value::Object(map)
}

// ----------------------------------------------------------------- CSV

/// `dimension,count` header and one row per dimension, ascending.
pub fn multiset_to_csv(m: &DimensionMultiset) -> String {
    let mut out = String::from("dimension,count\n");
    for (d, c) in m.iter() {
        out.push_str(&format!("{d},{c}\n"));
    }
    out
}

// --------------------------------------------------------------- LaTeX

/// Linear factors pulled out for display, in this order.
const DISPLAY_ROOTS: [i64; 5] = [0, 1, -1, 2, -2];

fn content(p: &RationalPoly) -> BigRational {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let gcd = p.coeffs().iter().fold(BigInt::zero(), |acc, c| {
        acc.gcd(&(c.numer() * (&lcm / c.denom())))
    });
    let c = BigRational::new(gcd, lcm);
    match p.leading_coeff() {
        Some(l) if l.is_negative() => -c,
        _ => c,
    }
}

fn latex_power(base: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{{{e}}}"),
    }
}

/// Expanded form in descending powers, e.g. `q^{2}+q-1`.
fn latex_expanded(p: &RationalPoly) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let a = c.abs();
        let mono = latex_power("q", k);
        let coef = if a.is_one() && k > 0 {
            String::new()
        } else {
            latex_rational(&a)
        };
        out.push_str(&coef);
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_rational(a: &BigRational) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

/// Factored display: rational content, powers of `q`, `q-1`, `q+1`,
/// `q-2`, `q+2`, then whatever is left in parentheses.
pub fn latex_poly(p: &RationalPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let c = content(p);
    let mut rest = p.scale(&c.recip());
    let mut body = String::new();
    for root in DISPLAY_ROOTS {
        let factor = RationalPoly::from_i64s(&[-root, 1]);
        let mut e = 0;
        while rest.degree().unwrap_or(0) > 0 {
            match rest.div_exact(&factor) {
                Ok(quot) => {
                    rest = quot;
                    e += 1;
                }
                Err(_) => break,
            }
        }
        let base = match root {
            0 => "q".to_string(),
            r if r > 0 => format!("(q-{r})"),
            r => format!("(q+{})", -r),
        };
        body.push_str(&latex_power(&base, e));
    }
    if !rest.is_one() {
        let inner = latex_expanded(&rest);
        if body.is_empty() && rest.degree() == Some(0) {
            body = inner;
        } else {
            body.push_str(&format!("({inner})"));
        }
    }
    let abs_c = c.abs();
    let mut out = String::new();
    if c.is_negative() {
        out.push('-');
    }
    if !abs_c.is_one() || body.is_empty() {
        out.push_str(&latex_rational(&abs_c));
    }
    out.push_str(&body);
    out
}

fn strip_outer_parens(s: String) -> String {
    if !s.starts_with('(') || !s.ends_with(')') {
        return s;
    }
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && i + 1 < s.len() {
            return s;
        }
    }
    s[1..s.len() - 1].to_string()
}

/// `m_1\mathcal{D}^{d_1}+...` in canonical term order.
pub fn zeta_to_latex(z: &ZetaPoly) -> String {
    if z.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (d, m) in z.terms() {
        let mut coef = latex_poly(m);
        let neg = coef.starts_with('-');
        if neg {
            coef.remove(0);
        }
        if !out.is_empty() || neg {
            out.push_str(if neg { "-" } else { "+" });
        }
        if coef != "1" {
            out.push_str(&coef);
        }
        out.push_str("\\mathcal{D}");
        if !d.is_one() {
            out.push_str(&format!(
                "^{{{}}}",
                strip_outer_parens(latex_poly(&d.to_rational()))
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Digit(u32),
    Q,
    Plus,
    Minus,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Caret,
    Frac,
    D,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, FormatError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        i += 1;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' | '&' | '*' => continue,
            '0'..='9' => Tok::Digit(c.to_digit(10).expect("digit")),
            'q' => Tok::Q,
            'D' => Tok::D,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '^' => Tok::Caret,
            '\\' => {
                let name_end = b[i..]
                    .iter()
                    .position(|x| !x.is_ascii_alphabetic())
                    .map_or(b.len(), |p| i + p);
                let name = if name_end == i {
                    // control symbol such as \\ or \,
                    i += 1;
                    &s[i - 1..i]
                } else {
                    let n = &s[i..name_end];
                    i = name_end;
                    n
                };
                match name {
                    "frac" | "tfrac" | "dfrac" => Tok::Frac,
                    "mathcal" => {
                        let rest = s[i..].trim_start();
                        let skip = s.len() - rest.len();
                        if rest.starts_with("{D}") {
                            i = skip + 3;
                        } else if rest.starts_with('D') {
                            i = skip + 1;
                        } else {
                            return Err(FormatError::Latex {
                                pos: start,
                                msg: "expected \\mathcal{D}".into(),
                            });
                        }
                        Tok::D
                    }
                    "left" | "right" | "quad" | "qquad" | "cdot" | "," | ";" | "!" | "\\" | " " => {
                        continue
                    }
                    other => {
                        return Err(FormatError::Latex {
                            pos: start,
                            msg: format!("unsupported command \\{other}"),
                        })
                    }
                }
            }
            '.' => continue,
            other => {
                return Err(FormatError::Latex {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Latex {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), FormatError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Digit(_) | Tok::Q | Tok::LParen | Tok::LBrace | Tok::Frac)
        )
    }

    /// `[-] term (+|- term)*` for polynomials in `q`.
    fn expr(&mut self) -> Result<RationalPoly, FormatError> {
        let mut neg = self.eat(&Tok::Minus);
        let mut acc = RationalPoly::zero();
        loop {
            let t = self.product()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<RationalPoly, FormatError> {
        if !self.starts_factor() {
            return self.err("expected a factor");
        }
        let mut acc = RationalPoly::one();
        while self.starts_factor() {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalPoly, FormatError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RationalPoly, FormatError> {
        match self.peek().cloned() {
            Some(Tok::Digit(_)) => {
                let mut n = BigInt::zero();
                while let Some(Tok::Digit(d)) = self.peek().cloned() {
                    n = n * 10 + d;
                    self.pos += 1;
                }
                Ok(RationalPoly::constant(BigRational::from_integer(n)))
            }
            Some(Tok::Q) => {
                self.pos += 1;
                Ok(RationalPoly::q())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RBrace)?;
                Ok(e)
            }
            Some(Tok::Frac) => {
                self.pos += 1;
                let num = self.argument()?;
                let den = self.argument()?;
                match num.div_exact(&den) {
                    Ok(x) => Ok(x),
                    Err(_) => self.err("fraction is not a polynomial"),
                }
            }
            _ => self.err("expected a factor"),
        }
    }

    /// A TeX macro argument: one token or a braced group.
    fn argument(&mut self) -> Result<RationalPoly, FormatError> {
        match self.peek().cloned() {
            Some(Tok::LBrace) => self.atom(),
            Some(Tok::Digit(d)) => {
                self.pos += 1;
                Ok(RationalPoly::from_i64(d as i64))
            }
            Some(Tok::Q) => {
                self.pos += 1;
                Ok(RationalPoly::q())
            }
            _ => self.err("expected a macro argument"),
        }
    }

    fn exponent(&mut self) -> Result<u32, FormatError> {
        let e = self.argument()?;
        match e.degree() {
            None => Ok(0),
            Some(0) if e.coeff(0).is_integer() && !e.coeff(0).is_negative() => {
                match e.coeff(0).to_integer().to_u32() {
                    Some(x) => Ok(x),
                    None => self.err("exponent too large"),
                }
            }
            _ => self.err("exponent must be a nonnegative integer constant"),
        }
    }

    /// Exponent of `\mathcal{D}`: one token or a braced polynomial.
    fn dimension(&mut self) -> Result<DimensionPoly, FormatError> {
        let d = if self.eat(&Tok::Caret) {
            self.argument()?
        } else {
            RationalPoly::one()
        };
        match d.to_integer() {
            Some(x) => Ok(x),
            None => self.err("dimension must have integer coefficients"),
        }
    }

    /// `[-] [coef] D[^dim] (+|- [coef] D[^dim])*`.
    fn zeta(&mut self) -> Result<ZetaPoly, FormatError> {
        let mut z = ZetaPoly::new();
        if self.peek().is_none() || self.peek() == Some(&Tok::Digit(0)) && self.toks.len() == 1 {
            self.pos = self.toks.len();
            return Ok(z);
        }
        let mut neg = self.eat(&Tok::Minus);
        loop {
            let coef = if self.starts_factor() {
                self.product()?
            } else {
                RationalPoly::one()
            };
            self.expect(&Tok::D)?;
            let dim = self.dimension()?;
            z.add_term(dim, if neg { -coef } else { coef });
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        if self.pos != self.toks.len() {
            return self.err("trailing input");
        }
        Ok(z)
    }
}

fn parser(s: &str) -> Result<Parser, FormatError> {
    Ok(Parser {
        toks: tokenize(s)?,
        pos: 0,
        end: s.len(),
    })
}

/// Parses a polynomial in `q` written in the subset of LaTeX emitted by
/// [`latex_poly`]: integers, `q`, `\frac ab`, parentheses, braces, `^`.
pub fn poly_from_latex(s: &str) -> Result<RationalPoly, FormatError> {
    let mut p = parser(s)?;
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses `sum m(q) \mathcal{D}^{d(q)}`. Alignment marks, `\\`, `\quad`
/// and a trailing period are ignored. Repeated dimensions are summed.
pub fn zeta_from_latex(s: &str) -> Result<ZetaPoly, FormatError> {
    parser(s)?.zeta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{g_zeta, gl_zeta, sd_zeta};

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::from_i64s(c)
    }

    #[test]
    fn poly_json() {
        assert_eq!(poly_to_json(&rp(&[-1, 0, 1])), json!(["-1", "0", "1"]));
        let half = rp(&[0, -1, 1]).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(poly_to_json(&half), json!(["0", "-1/2", "1/2"]));
        assert_eq!(poly_from_json(&poly_to_json(&half)).unwrap(), half);
        assert!(poly_from_json(&json!(["x"])).is_err());
    }

    #[test]
    fn zeta_json_round_trip() {
        for z in [
            gl_zeta(2),
            gl_zeta(4),
            sd_zeta(2).unwrap(),
            g_zeta(3, 2).unwrap(),
        ] {
            let s = zeta_to_json(&z).to_string();
            assert_eq!(zeta_from_json_str(&s).unwrap(), z);
        }
    }

    #[test]
    fn latex_forms() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            latex_poly(&rp(&[0, -1, 1]).scale(&half)),
            "\\frac{1}{2}q(q-1)"
        );
        assert_eq!(latex_poly(&rp(&[-1, 0, 1])), "(q-1)(q+1)");
        assert_eq!(latex_poly(&rp(&[3])), "3");
        assert_eq!(latex_poly(&rp(&[-1, 1, 1])), "(q^{2}+q-1)");
        assert_eq!(latex_poly(&rp(&[0, 0, 1, 0, 1])), "q^{2}(q^{2}+1)");
        assert_eq!(latex_poly(&rp(&[0, 1, -1])), "-q(q-1)");
        assert_eq!(
            zeta_to_latex(&gl_zeta(2)),
            "(q-1)\\mathcal{D}+\\frac{1}{2}q(q-1)\\mathcal{D}^{q-1}+(q-1)\\mathcal{D}^{q}\
             +\\frac{1}{2}(q-1)(q-2)\\mathcal{D}^{q+1}"
        );
    }

    #[test]
    fn latex_round_trip() {
        for z in [gl_zeta(3), sd_zeta(3).unwrap(), g_zeta(2, 3).unwrap()] {
            assert_eq!(zeta_from_latex(&zeta_to_latex(&z)).unwrap(), z);
        }
        for p in [
            rp(&[-1, 1, 1]),
            rp(&[0, 1, -1]),
            rp(&[7]),
            rp(&[0, 0, 0, 2, -6, 4]),
        ] {
            assert_eq!(poly_from_latex(&latex_poly(&p)).unwrap(), p);
        }
    }

    #[test]
    fn latex_tex_conventions() {
        // \frac 12 and single-token superscripts
        let z = zeta_from_latex(r"\frac 12 q(q-1)\mathcal{D}^{q-1}+(q-1)\mathcal{D}^q").unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(poly_from_latex("q^12").unwrap(), rp(&[0, 2]));
        assert!(zeta_from_latex(r"\alpha\mathcal{D}").is_err());
        assert!(zeta_from_latex(r"q\mathcal{D}^{q/2}").is_err());
    }

    #[test]
    fn csv() {
        let m: DimensionMultiset = [(1u32, 2u32), (2, 1)].into_iter().collect();
        assert_eq!(multiset_to_csv(&m), "dimension,count\n1,2\n2,1\n");
        assert_eq!(multiset_to_json(&m), json!({"1": 2, "2": 1}));
    }
}
