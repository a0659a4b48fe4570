//! Recursive-descent parser for formula text.
//!
//! Grammar (binding from loosest to tightest: `=>`, `|`, `&`, `~`):
//!
//! ```text
//! formula  := or ( "=>" formula )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | quantifier | atom
//! quant    := ("E" | "A") var ( "," var )* formula      -- scope extends right
//! atom     := "(" formula ")"
//!           | "$" name "(" term ( "," term )* ")"
//!           | name "[" term "]" "=" "@" int
//!           | term rel term
//! rel      := "=" | "!=" | "<" | "<=" | ">" | ">="
//! term     := factor ( ("+" | "-") factor )*            -- "-" only by a constant
//! factor   := primary ( "/" nat )*                      -- floor division by a constant
//! primary  := var | nat
//! ```
//!
//! Variables match `[a-z][a-z0-9_]*`; predicate and DFAO names may also use
//! upper case. A quantifier may be written fused with its first variable
//! (`Em` for `E m`) when the rest of the token is a valid variable and is not
//! followed by `[`.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Formula, Rel, Term};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(BigUint),
    Sym(&'static str),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse::<BigUint>().unwrap();
                toks.push((start, Tok::Number(n)));
            }
            _ => {
                let two = if i + 1 < bytes.len() { &text[i..i + 2] } else { "" };
                let sym: &'static str = match two {
                    "=>" => "=>",
                    "!=" => "!=",
                    "<=" => "<=",
                    ">=" => ">=",
                    _ => match b {
                        b'&' => "&",
                        b'|' => "|",
                        b'~' => "~",
                        b'(' => "(",
                        b')' => ")",
                        b'[' => "[",
                        b']' => "]",
                        b',' => ",",
                        b'+' => "+",
                        b'-' => "-",
                        b'/' => "/",
                        b'=' => "=",
                        b'<' => "<",
                        b'>' => ">",
                        b'@' => "@",
                        b'$' => "$",
                        _ => {
                            return Err(ParseError {
                                pos: i,
                                msg: format!("unexpected character `{}`", b as char),
                            })
                        }
                    },
                };
                i += sym.len();
                toks.push((i - sym.len(), Tok::Sym(sym)));
            }
        }
    }
    Ok(toks)
}

fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if let Some(Tok::Sym(s)) = self.peek() {
            if *s == sym {
                self.at += 1;
                return true;
            }
        }
        false
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{sym}`")))
        }
    }

    fn error(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos(), msg: msg.to_string() }
    }
}

pub(crate) fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut lx = Lexer { toks, at: 0, end: text.len() };
    let f = formula(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.error("unexpected trailing input"));
    }
    Ok(f)
}

fn formula(lx: &mut Lexer) -> Result<Formula, ParseError> {
    let lhs = or(lx)?;
    if lx.eat("=>") {
        let rhs = formula(lx)?;
        return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
    }
    Ok(lhs)
}

fn or(lx: &mut Lexer) -> Result<Formula, ParseError> {
    let mut acc = and(lx)?;
    while lx.eat("|") {
        let rhs = and(lx)?;
        acc = Formula::Or(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn and(lx: &mut Lexer) -> Result<Formula, ParseError> {
    let mut acc = unary(lx)?;
    while lx.eat("&") {
        let rhs = unary(lx)?;
        acc = Formula::And(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

/// Splits a fused quantifier token like `Em` into its variable, if the token
/// is a quantifier rather than a predicate or DFAO name.
fn quantifier_split(lx: &Lexer) -> Option<(char, Option<String>)> {
    let Some(Tok::Ident(id)) = lx.peek() else { return None };
    let first = id.chars().next().unwrap();
    if first != 'E' && first != 'A' {
        return None;
    }
    if id.len() == 1 {
        return Some((first, None));
    }
    let rest = &id[1..];
    if is_var_name(rest) && lx.peek2() != Some(&Tok::Sym("[")) {
        return Some((first, Some(rest.to_string())));
    }
    None
}

fn unary(lx: &mut Lexer) -> Result<Formula, ParseError> {
    if lx.eat("~") {
        let f = unary(lx)?;
        return Ok(Formula::Not(Box::new(f)));
    }
    if let Some((q, first_var)) = quantifier_split(lx) {
        lx.bump();
        let mut vars = Vec::new();
        match first_var {
            Some(v) => vars.push(v),
            None => vars.push(var_name(lx)?),
        }
        while lx.eat(",") {
            vars.push(var_name(lx)?);
        }
        let body = formula(lx)?;
        return Ok(match q {
            'E' => Formula::Exists(vars, Box::new(body)),
            _ => Formula::Forall(vars, Box::new(body)),
        });
    }
    atom(lx)
}

fn var_name(lx: &mut Lexer) -> Result<String, ParseError> {
    match lx.peek() {
        Some(Tok::Ident(id)) if is_var_name(id) => {
            let id = id.clone();
            lx.bump();
            Ok(id)
        }
        _ => Err(lx.error("expected a variable name")),
    }
}

fn atom(lx: &mut Lexer) -> Result<Formula, ParseError> {
    match lx.peek() {
        Some(Tok::Sym("(")) => {
            lx.bump();
            let f = formula(lx)?;
            lx.expect(")")?;
            Ok(f)
        }
        Some(Tok::Sym("$")) => {
            lx.bump();
            let name = pred_name(lx)?;
            lx.expect("(")?;
            let mut args = vec![term(lx)?];
            while lx.eat(",") {
                args.push(term(lx)?);
            }
            lx.expect(")")?;
            Ok(Formula::Call { name, args })
        }
        Some(Tok::Ident(_)) if lx.peek2() == Some(&Tok::Sym("[")) => {
            let name = pred_name(lx)?;
            lx.expect("[")?;
            let arg = term(lx)?;
            lx.expect("]")?;
            lx.expect("=")?;
            lx.expect("@")?;
            let negative = lx.eat("-");
            let value = match lx.bump() {
                Some(Tok::Number(n)) => {
                    let v: i64 = n.try_into().map_err(|_| lx.error("output value too large"))?;
                    if negative {
                        -v
                    } else {
                        v
                    }
                }
                _ => return Err(lx.error("expected an output value after `@`")),
            };
            Ok(Formula::DfaoEq { name, arg, value })
        }
        _ => {
            let t1 = term(lx)?;
            let rel = match lx.bump() {
                Some(Tok::Sym("=")) => Rel::Eq,
                Some(Tok::Sym("!=")) => Rel::Ne,
                Some(Tok::Sym("<")) => Rel::Lt,
                Some(Tok::Sym("<=")) => Rel::Le,
                Some(Tok::Sym(">")) => Rel::Gt,
                Some(Tok::Sym(">=")) => Rel::Ge,
                _ => return Err(lx.error("expected a relation")),
            };
            let t2 = term(lx)?;
            Ok(Formula::Rel(t1, rel, t2))
        }
    }
}

fn pred_name(lx: &mut Lexer) -> Result<String, ParseError> {
    match lx.bump() {
        Some(Tok::Ident(id)) => Ok(id),
        _ => Err(lx.error("expected a predicate name")),
    }
}

fn term(lx: &mut Lexer) -> Result<Term, ParseError> {
    let mut acc = factor(lx)?;
    loop {
        if lx.eat("+") {
            let rhs = factor(lx)?;
            acc = Term::Add(Box::new(acc), Box::new(rhs));
        } else if lx.eat("-") {
            match factor(lx)? {
                Term::Const(c) => acc = Term::SubConst(Box::new(acc), c),
                _ => return Err(lx.error("subtraction is only defined by a constant")),
            }
        } else {
            return Ok(acc);
        }
    }
}

fn factor(lx: &mut Lexer) -> Result<Term, ParseError> {
    let mut acc = primary(lx)?;
    while lx.eat("/") {
        match lx.bump() {
            Some(Tok::Number(c)) => {
                if c.is_zero() {
                    return Err(lx.error("division by zero"));
                }
                acc = Term::DivConst(Box::new(acc), c);
            }
            _ => return Err(lx.error("division is only defined by a constant")),
        }
    }
    Ok(acc)
}

fn primary(lx: &mut Lexer) -> Result<Term, ParseError> {
    match lx.peek() {
        Some(Tok::Number(_)) => {
            let Some(Tok::Number(n)) = lx.bump() else { unreachable!() };
            Ok(Term::Const(n))
        }
        Some(Tok::Ident(id)) if is_var_name(id) => {
            let id = id.clone();
            lx.bump();
            Ok(Term::Var(id))
        }
        _ => Err(lx.error("expected a variable or constant")),
    }
}
