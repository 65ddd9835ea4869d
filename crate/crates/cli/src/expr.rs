//! Parser turning expression strings like `-1/x`, `2*x + 1`, `log(x - 2)`
//! into the supported closed-form piece family.

use semidisc::{ExtReal, PieceExpr};

#[derive(Debug)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

/// Symbolic value restricted to the closed-form family.
#[derive(Clone, Copy, Debug)]
enum Val {
    Const(f64),
    /// `a + b*x`, `b != 0`
    Affine { a: f64, b: f64 },
    /// `a + b/(x - x0)`, `b != 0`
    Recip { a: f64, b: f64, x0: f64 },
    /// `a + b*ln(x - x0)`, `b != 0`
    Log { a: f64, b: f64, x0: f64 },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    X,
    LogFn,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            'x' => {
                toks.push((i, Tok::X));
                i += 1;
            }
            'l' if s[i..].starts_with("log") => {
                toks.push((i, Tok::LogFn));
                i += 3;
            }
            'l' if s[i..].starts_with("ln") => {
                toks.push((i, Tok::LogFn));
                i += 2;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E')
                {
                    // accept an exponent sign directly after e/E
                    if matches!(bytes[i] as char, 'e' | 'E')
                        && i + 1 < bytes.len()
                        && matches!(bytes[i + 1] as char, '+' | '-')
                    {
                        i += 1;
                    }
                    i += 1;
                }
                let text = &s[start..i];
                let v: f64 = text.parse().map_err(|_| ExprError {
                    offset: start,
                    message: format!("invalid number `{text}`"),
                })?;
                toks.push((start, Tok::Num(v)));
            }
            other => {
                return Err(ExprError {
                    offset: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError { offset: self.offset(), message: message.into() }
    }
}

fn add(lx: &Lexer, l: Val, r: Val) -> Result<Val, ExprError> {
    use Val::*;
    let out = match (l, r) {
        (Const(c), Const(d)) => Const(c + d),
        (Const(c), Affine { a, b }) | (Affine { a, b }, Const(c)) => Affine { a: a + c, b },
        (Const(c), Recip { a, b, x0 }) | (Recip { a, b, x0 }, Const(c)) => {
            Recip { a: a + c, b, x0 }
        }
        (Const(c), Log { a, b, x0 }) | (Log { a, b, x0 }, Const(c)) => Log { a: a + c, b, x0 },
        (Affine { a, b }, Affine { a: a2, b: b2 }) => {
            let (a, b) = (a + a2, b + b2);
            if b == 0.0 {
                Const(a)
            } else {
                Affine { a, b }
            }
        }
        _ => return Err(lx.err("sum leaves the supported closed-form family")),
    };
    Ok(out)
}

fn scale(v: Val, c: f64) -> Val {
    use Val::*;
    if c == 0.0 {
        return Const(0.0);
    }
    match v {
        Const(a) => Const(c * a),
        Affine { a, b } => Affine { a: c * a, b: c * b },
        Recip { a, b, x0 } => Recip { a: c * a, b: c * b, x0 },
        Log { a, b, x0 } => Log { a: c * a, b: c * b, x0 },
    }
}

fn mul(lx: &Lexer, l: Val, r: Val) -> Result<Val, ExprError> {
    match (l, r) {
        (Val::Const(c), v) | (v, Val::Const(c)) => Ok(scale(v, c)),
        _ => Err(lx.err("product leaves the supported closed-form family")),
    }
}

fn div(lx: &Lexer, l: Val, r: Val) -> Result<Val, ExprError> {
    use Val::*;
    match (l, r) {
        (_, Const(0.0)) => Err(lx.err("division by zero")),
        (v, Const(c)) => Ok(scale(v, 1.0 / c)),
        (Const(c), Affine { a, b }) => Ok(Recip { a: 0.0, b: c / b, x0: -a / b }),
        _ => Err(lx.err("quotient leaves the supported closed-form family")),
    }
}

fn apply_log(lx: &Lexer, v: Val) -> Result<Val, ExprError> {
    match v {
        Val::Affine { a, b } if b > 0.0 => Ok(Val::Log { a: b.ln(), b: 1.0, x0: -a / b }),
        _ => Err(lx.err("log argument must be an increasing affine function of x")),
    }
}

fn parse_sum(lx: &mut Lexer) -> Result<Val, ExprError> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let rhs = parse_term(lx)?;
                acc = add(lx, acc, rhs)?;
            }
            Some(Tok::Minus) => {
                lx.next();
                let rhs = parse_term(lx)?;
                acc = add(lx, acc, scale(rhs, -1.0))?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Val, ExprError> {
    let mut acc = parse_atom(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let rhs = parse_atom(lx)?;
                acc = mul(lx, acc, rhs)?;
            }
            Some(Tok::Slash) => {
                lx.next();
                let rhs = parse_atom(lx)?;
                acc = div(lx, acc, rhs)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Val, ExprError> {
    match lx.next() {
        Some(Tok::Num(v)) => Ok(Val::Const(v)),
        Some(Tok::X) => Ok(Val::Affine { a: 0.0, b: 1.0 }),
        Some(Tok::Minus) => Ok(scale(parse_atom(lx)?, -1.0)),
        Some(Tok::Plus) => parse_atom(lx),
        Some(Tok::LParen) => {
            let v = parse_sum(lx)?;
            if lx.next() != Some(Tok::RParen) {
                return Err(lx.err("expected `)`"));
            }
            Ok(v)
        }
        Some(Tok::LogFn) => {
            if lx.next() != Some(Tok::LParen) {
                return Err(lx.err("expected `(` after log"));
            }
            let v = parse_sum(lx)?;
            if lx.next() != Some(Tok::RParen) {
                return Err(lx.err("expected `)`"));
            }
            apply_log(lx, v)
        }
        _ => Err(lx.err("expected a number, `x`, `log(...)`, or a parenthesized expression")),
    }
}

/// Parse one piece expression.
pub fn parse_piece(s: &str) -> Result<PieceExpr, ExprError> {
    match s.trim() {
        "-inf" => return Ok(PieceExpr::NegInf),
        "inf" | "+inf" => return Ok(PieceExpr::PosInf),
        "logistic" => return Ok(PieceExpr::Logistic),
        _ => {}
    }
    let toks = lex(s)?;
    let mut lx = Lexer { toks, pos: 0, len: s.len() };
    let v = parse_sum(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.err("trailing input after expression"));
    }
    Ok(match v {
        Val::Const(c) => PieceExpr::Const(c),
        Val::Affine { a, b } => PieceExpr::Affine { a, b },
        Val::Recip { a, b, x0 } => PieceExpr::Recip { a, b, x0 },
        Val::Log { a, b, x0 } => PieceExpr::Log { a, b, x0 },
    })
}

/// Parse an interval string like `(0,1)`, `(-inf, 2)`, or `(0, 2pi)`.
pub fn parse_interval(s: &str) -> Result<(ExtReal, ExtReal), String> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("interval `{t}` must look like `(lo,hi)`"))?;
    let mut parts = inner.splitn(2, ',');
    let lo = parts.next().unwrap_or("").trim();
    let hi = parts.next().ok_or_else(|| format!("interval `{t}` needs two endpoints"))?.trim();
    Ok((parse_endpoint(lo)?, parse_endpoint(hi)?))
}

fn parse_endpoint(s: &str) -> Result<ExtReal, String> {
    match s {
        "-inf" => Ok(ExtReal::NegInf),
        "inf" | "+inf" => Ok(ExtReal::PosInf),
        "pi" => Ok(ExtReal::Finite(std::f64::consts::PI)),
        "2pi" | "2*pi" => Ok(ExtReal::Finite(2.0 * std::f64::consts::PI)),
        other => other
            .parse::<f64>()
            .map(ExtReal::Finite)
            .map_err(|_| format!("invalid interval endpoint `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_family() {
        assert_eq!(parse_piece("0").unwrap(), PieceExpr::Const(0.0));
        assert_eq!(parse_piece("-3").unwrap(), PieceExpr::Const(-3.0));
        assert_eq!(parse_piece("x").unwrap(), PieceExpr::Affine { a: 0.0, b: 1.0 });
        assert_eq!(parse_piece("2*x + 1").unwrap(), PieceExpr::Affine { a: 1.0, b: 2.0 });
        assert_eq!(
            parse_piece("-1/x").unwrap(),
            PieceExpr::Recip { a: 0.0, b: -1.0, x0: 0.0 }
        );
        assert_eq!(
            parse_piece("2 + 1/(x - 3)").unwrap(),
            PieceExpr::Recip { a: 2.0, b: 1.0, x0: 3.0 }
        );
        assert_eq!(
            parse_piece("log(x - 2)").unwrap(),
            PieceExpr::Log { a: 0.0, b: 1.0, x0: 2.0 }
        );
        assert_eq!(parse_piece("-inf").unwrap(), PieceExpr::NegInf);
        assert_eq!(parse_piece("logistic").unwrap(), PieceExpr::Logistic);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_piece("1//x").is_err());
        assert!(parse_piece("x*x").is_err());
        assert!(parse_piece("1/(x*x)").is_err());
        assert!(parse_piece("").is_err());
        assert!(parse_piece("2 +").is_err());
    }

    #[test]
    fn intervals() {
        assert_eq!(
            parse_interval("(0,1)").unwrap(),
            (ExtReal::Finite(0.0), ExtReal::Finite(1.0))
        );
        assert_eq!(parse_interval("(-inf, 2)").unwrap().0, ExtReal::NegInf);
        assert!(parse_interval("0,1").is_err());
    }
}
