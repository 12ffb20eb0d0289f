//! The expression grammar for elements, tensors and necklaces.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := [rational] tensor | rational
//! tensor  := product ('#' product)*
//! product := atom ('.' atom)*
//! atom    := '(' expr ')' | e(v) | t(v) | D(x) | name ['*']
//! ```
//!
//! `a.b` is the composite `a ∘ b`, `x # y` is `x ⊗ y`, `e(v)` is an idempotent,
//! a bare rational is a multiple of the unit `Σ e_i`. Rendering produces
//! strings that parse back to the same value.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lin::{Lin, Q};
use crate::ncalg::{nc_mul, nc_one, Cyclic, Tensor, Word, NC};
use crate::quiver::Quiver;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Slash,
    Plus,
    Minus,
    Dot,
    Hash,
    LParen,
    RParen,
    Name(String),
    Func(char, String),
}

fn lex(input: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '.' => {
                out.push(Tok::Dot);
                i += 1
            }
            '#' => {
                out.push(Tok::Hash);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let func = matches!(name.as_str(), "e" | "t" | "D") && i < chars.len() && chars[i] == '(';
                if func {
                    let mut depth = 0;
                    let open = i;
                    loop {
                        if i >= chars.len() {
                            return Err(Error::Parse(format!("unclosed `{name}(`")));
                        }
                        match chars[i] {
                            '(' => depth += 1,
                            ')' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => {}
                        }
                        i += 1;
                    }
                    let inner: String = chars[open + 1..i].iter().filter(|c| !c.is_whitespace()).collect();
                    i += 1;
                    out.push(Tok::Func(name.chars().next().expect("nonempty"), inner));
                } else {
                    let mut name = name;
                    if i < chars.len() && chars[i] == '*' {
                        name.push('*');
                        i += 1;
                    }
                    out.push(Tok::Name(name));
                }
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

/// A parsed value: a tensor of a fixed arity (arity one is an element of `A`).
#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub arity: usize,
    pub terms: Tensor,
}

impl Value {
    fn scalar(q: &Quiver, c: Q) -> Value {
        let one = nc_one(q);
        Value { arity: 1, terms: one.map_keys(|w| Some((vec![w.clone()], c.clone()))) }
    }

    fn from_nc(x: NC) -> Value {
        Value { arity: 1, terms: x.map_keys(|w| Some((vec![w.clone()], Q::one()))) }
    }

    fn as_nc(&self) -> Result<NC> {
        if self.arity != 1 && !self.terms.is_zero() {
            return Err(Error::Parse(format!("expected an element, found a tensor of arity {}", self.arity)));
        }
        Ok(self.terms.map_keys(|k| Some((k[0].clone(), Q::one()))))
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    quiver: &'a Quiver,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Value> {
        let mut sign = Q::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -sign;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        acc.terms = acc.terms.scaled(&sign);
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => Q::one(),
                Some(Tok::Minus) => -Q::one(),
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = add_values(acc, t, &sign)?;
        }
        Ok(acc)
    }

    fn rational(&mut self) -> Result<Option<Q>> {
        let Some(Tok::Num(n)) = self.peek().cloned() else { return Ok(None) };
        self.pos += 1;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(d)) if !d.is_zero() => return Ok(Some(Q::new(n, d))),
                _ => return Err(Error::Parse("bad denominator".into())),
            }
        }
        Ok(Some(Q::from_integer(n)))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Name(_) | Tok::Func(..) | Tok::LParen))
    }

    fn term(&mut self) -> Result<Value> {
        let coeff = self.rational()?;
        if !self.starts_atom() {
            return match coeff {
                Some(c) => Ok(Value::scalar(self.quiver, c)),
                None => Err(Error::Parse(format!("expected a term at token {}", self.pos))),
            };
        }
        let mut v = self.tensor()?;
        if let Some(c) = coeff {
            v.terms = v.terms.scaled(&c);
        }
        Ok(v)
    }

    fn tensor(&mut self) -> Result<Value> {
        let mut acc = self.product()?;
        while self.peek() == Some(&Tok::Hash) {
            self.pos += 1;
            let rhs = self.product()?;
            let mut terms = Tensor::zero();
            for (k1, a) in acc.terms.iter() {
                for (k2, b) in rhs.terms.iter() {
                    let mut key = k1.clone();
                    key.extend(k2.iter().cloned());
                    terms.add_term(key, a * b);
                }
            }
            acc = Value { arity: acc.arity + rhs.arity, terms };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            let rhs = self.atom()?;
            acc = Value::from_nc(nc_mul(&acc.as_nc()?, &rhs.as_nc()?));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value> {
        match self.next() {
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(Tok::Func('e', v)) => {
                let idx = self.quiver.vertex_index(&v)?;
                Ok(Value::from_nc(Lin::basis(Word::unit(idx))))
            }
            Some(Tok::Func(f, inner)) => {
                let l = self.quiver.letter_by_name(&format!("{f}({inner})"))?;
                Ok(Value::from_nc(Lin::basis(Word::letter(l))))
            }
            Some(Tok::Name(n)) => {
                let l = self.quiver.letter_by_name(&n)?;
                Ok(Value::from_nc(Lin::basis(Word::letter(l))))
            }
            Some(Tok::Num(_)) => {
                self.pos -= 1;
                let c = self.rational()?.expect("number token");
                Ok(Value::scalar(self.quiver, c))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn add_values(a: Value, b: Value, sign: &Q) -> Result<Value> {
    if a.terms.is_zero() {
        return Ok(Value { arity: b.arity, terms: b.terms.scaled(sign) });
    }
    if b.terms.is_zero() {
        return Ok(a);
    }
    if a.arity != b.arity {
        return Err(Error::Parse(format!("cannot add tensors of arity {} and {}", a.arity, b.arity)));
    }
    let mut terms = a.terms;
    terms.add_scaled(&b.terms, sign);
    Ok(Value { arity: a.arity, terms })
}

/// Parse an expression of any arity.
pub fn parse(quiver: &Quiver, input: &str) -> Result<Value> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, quiver };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

/// Parse an element of the path algebra.
pub fn parse_nc(quiver: &Quiver, input: &str) -> Result<NC> {
    parse(quiver, input)?.as_nc()
}

/// Parse an element of `A^{⊗arity}`.
pub fn parse_tensor(quiver: &Quiver, input: &str, arity: usize) -> Result<Tensor> {
    let v = parse(quiver, input)?;
    if v.terms.is_zero() {
        return Ok(Tensor::zero());
    }
    if v.arity != arity {
        return Err(Error::Parse(format!("expected arity {arity}, found {}", v.arity)));
    }
    Ok(v.terms)
}

pub fn render_word(quiver: &Quiver, w: &Word) -> String {
    if w.is_unit() {
        return format!("e({})", quiver.vertex_name(w.source()));
    }
    w.letters().iter().map(|l| quiver.arrow(l.id).name.clone()).collect::<Vec<_>>().join(".")
}

pub(crate) fn render_terms<K: Ord + Clone>(terms: &Lin<K>, mut render_key: impl FnMut(&K) -> String) -> String {
    if terms.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (k, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&abs.to_string());
            out.push(' ');
        }
        out.push_str(&render_key(k));
    }
    out
}

pub fn render_nc(quiver: &Quiver, x: &NC) -> String {
    render_terms(x, |w| render_word(quiver, w))
}

pub fn render_tensor(quiver: &Quiver, t: &Tensor) -> String {
    render_terms(t, |k| k.iter().map(|w| render_word(quiver, w)).collect::<Vec<_>>().join(" # "))
}

pub fn render_cyclic(quiver: &Quiver, c: &Cyclic) -> String {
    render_nc(quiver, c.terms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lin::{q, qf};
    use crate::ncalg::{nc_letter, tensor2, to_cyclic};
    use crate::sample::Sampler;
    use proptest::prelude::*;

    #[test]
    fn parses_products_sums_and_tensors() {
        let qb = Quiver::jordan().double(0).unwrap();
        let a = qb.letter_by_name("a").unwrap();
        let s = qb.letter_by_name("a*").unwrap();
        let x = parse_nc(&qb, "a.a* - a*.a").unwrap();
        let expected = &nc_mul(&nc_letter(a), &nc_letter(s)) - &nc_mul(&nc_letter(s), &nc_letter(a));
        assert_eq!(x, expected);
        let t = parse_tensor(&qb, "e(0) # a - 3/2 a # e(0)", 2).unwrap();
        assert_eq!(t.coeff(&vec![Word::letter(a), Word::unit(0)]), -qf(3, 2));
        let grouped = parse_nc(&qb, "(a + a*).a").unwrap();
        assert_eq!(grouped.len(), 2);
        let scalar = parse_nc(&qb, "2").unwrap();
        assert_eq!(scalar.coeff(&Word::unit(0)), q(2));
        assert_eq!(parse_tensor(&qb, "a # a*", 2).unwrap(), tensor2(&nc_letter(a), &nc_letter(s)));
    }

    #[test]
    fn parse_errors() {
        let qb = Quiver::jordan().double(0).unwrap();
        assert!(parse_nc(&qb, "b").is_err());
        assert!(parse_nc(&qb, "a #").is_err());
        assert!(parse_nc(&qb, "a + a # a").is_err());
        assert!(parse_nc(&qb, "e(7)").is_err());
        assert!(parse_nc(&qb, "1/0 a").is_err());
        assert!(parse_nc(&qb, "").is_err());
        assert!(parse_nc(&qb, "a # a").is_err());
    }

    #[test]
    fn composition_across_vertices() {
        let qb = Quiver::a3_framed().double(0).unwrap();
        assert!(parse_nc(&qb, "p.a0").unwrap().is_zero());
        assert!(!parse_nc(&qb, "a0.p").unwrap().is_zero());
        assert_eq!(parse_nc(&qb, "a0.e(0)").unwrap(), parse_nc(&qb, "a0").unwrap());
        assert_eq!(render_nc(&qb, &parse_nc(&qb, "e(inf) - p*.p").unwrap()), "e(inf) - p*.p");
    }

    proptest! {
        #[test]
        fn render_round_trips(seed in 0u64..300) {
            let qb = Quiver::a3_framed().double(0).unwrap();
            let mut s = Sampler::new(seed);
            let x = s.closed_element(&qb, 5, 3);
            let y = s.closed_element(&qb, 5, 2);
            prop_assert_eq!(parse_nc(&qb, &render_nc(&qb, &x)).unwrap(), x.clone());
            let t = tensor2(&x, &y);
            prop_assert_eq!(parse_tensor(&qb, &render_tensor(&qb, &t), 2).unwrap(), t);
            let c = to_cyclic(&x);
            prop_assert_eq!(to_cyclic(&parse_nc(&qb, &render_cyclic(&qb, &c)).unwrap()), c);
        }
    }
}
