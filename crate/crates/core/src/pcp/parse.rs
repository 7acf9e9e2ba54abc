//! Text grammar for presentations.
//!
//! ```text
//! p=2 n=4
//! x1^2 = x4; [x2,x1] = x3
//! ```
//!
//! Statements are separated by `;` or newlines, `#` starts a comment.
//! Right-hand sides are products of `xk` with optional `^e`, where `e` is an
//! integer, a parameter name, or a braced/parenthesized sum like `{1-r}`.
//! `1` denotes the identity. Relations that are not listed are trivial.

use std::collections::BTreeMap;

use super::{Element, PcPresentation, Word};
use crate::error::{Error, Result};

/// Replaces standalone parameter identifiers by their values.
pub fn substitute_params(text: &str, params: &BTreeMap<String, i64>) -> String {
    let mut out = String::with_capacity(text.len());
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            match params.get(&ident) {
                Some(v) => out.push_str(&v.to_string()),
                None => out.push_str(&ident),
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    parse_presentation_with(text, &BTreeMap::new())
}

struct Header {
    p: Option<u8>,
    n: Option<usize>,
    d: Option<usize>,
}

enum Lhs {
    Power(usize, i64),
    Comm(usize, usize),
}

/// Parses with parameter values available to exponent expressions.
pub fn parse_presentation_with(text: &str, params: &BTreeMap<String, i64>) -> Result<PcPresentation> {
    let mut header = Header { p: None, n: None, d: None };
    let mut rels: Vec<(Lhs, Vec<(usize, i64)>)> = Vec::new();
    for raw_line in text.lines() {
        let line = raw_line.split('#').next().unwrap_or("");
        for stmt in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if is_header(stmt) {
                parse_header(stmt, &mut header)?;
            } else {
                let (lhs, rhs) = stmt
                    .split_once('=')
                    .ok_or_else(|| Error::Syntax(format!("expected `=` in {stmt:?}")))?;
                let lhs = parse_lhs(lhs.trim(), params)?;
                let rhs = parse_word(rhs.trim(), params)?;
                rels.push((lhs, rhs));
            }
        }
    }
    let p = header.p.unwrap_or(2);
    let max_used = rels
        .iter()
        .flat_map(|(l, r)| {
            let mut v: Vec<usize> = r.iter().map(|&(g, _)| g).collect();
            match *l {
                Lhs::Power(i, _) => v.push(i),
                Lhs::Comm(j, i) => {
                    v.push(j);
                    v.push(i)
                }
            }
            v
        })
        .max()
        .map_or(0, |m| m + 1);
    let n = match header.n {
        Some(n) => {
            if max_used > n {
                return Err(Error::UnknownGenerator { gen: max_used, n });
            }
            n
        }
        None => max_used,
    };
    let mut power: Vec<Option<Element>> = vec![None; n];
    let mut comm: Vec<Vec<Option<Element>>> = (0..n).map(|j| vec![None; j]).collect();
    // Right-hand sides are normal words in later generators; reduce exponents
    // by writing them into an exponent vector directly when already ordered,
    // otherwise reject: without the full presentation we cannot collect.
    for (lhs, rhs) in &rels {
        let e = normal_word(rhs, n, p)?;
        match *lhs {
            Lhs::Power(i, ex) => {
                if ex != p as i64 {
                    return Err(Error::Syntax(format!("power relation x{}^{ex} must use exponent p={p}", i + 1)));
                }
                if power[i].replace(e).is_some() {
                    return Err(Error::Syntax(format!("duplicate relation for x{}^{p}", i + 1)));
                }
            }
            Lhs::Comm(j, i) => {
                if j <= i {
                    return Err(Error::Syntax(format!(
                        "commutator [x{},x{}] must have its first generator later",
                        j + 1,
                        i + 1
                    )));
                }
                if comm[j][i].replace(e).is_some() {
                    return Err(Error::Syntax(format!("duplicate relation for [x{},x{}]", j + 1, i + 1)));
                }
            }
        }
    }
    let id = Element::identity(n);
    let power: Vec<Element> = power.into_iter().map(|x| x.unwrap_or_else(|| id.clone())).collect();
    let comm: Vec<Vec<Element>> =
        comm.into_iter().map(|row| row.into_iter().map(|x| x.unwrap_or_else(|| id.clone())).collect()).collect();
    let mut pc = PcPresentation::from_relations(p, n, power, comm)?;
    if !pc.is_consistent() {
        return Err(Error::Inconsistent);
    }
    let weights = crate::structure::infer_weights(&pc);
    let defs = pc.infer_definitions();
    pc.set_weights_and_defs(weights, defs);
    if let Some(d) = header.d {
        if d != pc.minimal_generators() {
            return Err(Error::Malformed(format!(
                "header says d={d} but the group needs {} generators",
                pc.minimal_generators()
            )));
        }
    }
    Ok(pc)
}

fn is_header(stmt: &str) -> bool {
    !stmt.contains('x') && !stmt.contains('[')
}

fn parse_header(stmt: &str, h: &mut Header) -> Result<()> {
    let norm = stmt.replace(" =", "=").replace("= ", "=");
    for tok in norm.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Syntax(format!("bad header token {tok:?}")))?;
        let v: usize = v.parse().map_err(|_| Error::Syntax(format!("bad header value {tok:?}")))?;
        match k {
            "p" => {
                if v < 2 || v > 251 || !(2..v).all(|q| v % q != 0) {
                    return Err(Error::Syntax(format!("p={v} is not a supported prime")));
                }
                h.p = Some(v as u8)
            }
            "n" => h.n = Some(v),
            "d" => h.d = Some(v),
            _ => return Err(Error::Syntax(format!("unknown header key {k:?}"))),
        }
    }
    Ok(())
}

fn parse_gen(s: &str) -> Result<usize> {
    let digits = s
        .trim()
        .strip_prefix('x')
        .ok_or_else(|| Error::Syntax(format!("expected generator, found {s:?}")))?;
    let k: usize = digits.parse().map_err(|_| Error::Syntax(format!("bad generator {s:?}")))?;
    if k == 0 {
        return Err(Error::Syntax("generators are numbered from x1".into()));
    }
    Ok(k - 1)
}

fn parse_lhs(s: &str, params: &BTreeMap<String, i64>) -> Result<Lhs> {
    if let Some(inner) = s.strip_prefix('[') {
        let inner =
            inner.strip_suffix(']').ok_or_else(|| Error::Syntax(format!("unclosed commutator {s:?}")))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| Error::Syntax(format!("bad commutator {s:?}")))?;
        return Ok(Lhs::Comm(parse_gen(a)?, parse_gen(b)?));
    }
    let (g, e) = s.split_once('^').ok_or_else(|| Error::Syntax(format!("bad left-hand side {s:?}")))?;
    Ok(Lhs::Power(parse_gen(g)?, parse_exponent(e.trim(), params)?))
}

/// Parses a product of generator powers.
pub(crate) fn parse_word(s: &str, params: &BTreeMap<String, i64>) -> Result<Word> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '·' {
            i += 1;
        } else if c == '1' && (i + 1 == chars.len() || !chars[i + 1].is_ascii_digit()) {
            i += 1;
        } else if c == 'x' {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let g = parse_gen(&chars[start..i].iter().collect::<String>())?;
            let mut e = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let estart = i;
                if i < chars.len() && (chars[i] == '{' || chars[i] == '(') {
                    let close = if chars[i] == '{' { '}' } else { ')' };
                    while i < chars.len() && chars[i] != close {
                        i += 1;
                    }
                    if i == chars.len() {
                        return Err(Error::Syntax(format!("unclosed exponent in {s:?}")));
                    }
                    i += 1;
                } else {
                    if i < chars.len() && chars[i] == '-' {
                        i += 1;
                    }
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                }
                e = parse_exponent(&chars[estart..i].iter().collect::<String>(), params)?;
            }
            out.push((g, e));
        } else {
            return Err(Error::Syntax(format!("unexpected {c:?} in word {s:?}")));
        }
    }
    Ok(out)
}

fn parse_exponent(s: &str, params: &BTreeMap<String, i64>) -> Result<i64> {
    let t = s.trim();
    let t = t
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .or_else(|| t.strip_prefix('(').and_then(|x| x.strip_suffix(')')))
        .unwrap_or(t);
    // sum of signed terms
    let mut total = 0i64;
    let mut sign = 1i64;
    let mut term = String::new();
    let flush = |term: &mut String, sign: i64, total: &mut i64| -> Result<()> {
        let tt = term.trim();
        if tt.is_empty() {
            return Ok(());
        }
        let v = match tt.parse::<i64>() {
            Ok(v) => v,
            Err(_) => *params.get(tt).ok_or_else(|| Error::Syntax(format!("unknown parameter {tt:?}")))?,
        };
        *total += sign * v;
        term.clear();
        Ok(())
    };
    if t.is_empty() {
        return Err(Error::Syntax("empty exponent".into()));
    }
    for c in t.chars() {
        match c {
            '+' | '-' => {
                flush(&mut term, sign, &mut total)?;
                sign = if c == '-' { -1 } else { 1 };
            }
            _ => term.push(c),
        }
    }
    flush(&mut term, sign, &mut total)?;
    Ok(total)
}

/// Converts a word given in strictly increasing generator order to an
/// exponent vector; the grammar requires right-hand sides in normal form.
fn normal_word(w: &Word, n: usize, p: u8) -> Result<Element> {
    let mut v = vec![0u8; n];
    let mut last: Option<usize> = None;
    for &(g, e) in w {
        if last.is_some_and(|l| g <= l) {
            return Err(Error::Syntax(format!(
                "right-hand side must list generators in increasing order (x{} after x{})",
                g + 1,
                last.unwrap() + 1
            )));
        }
        last = Some(g);
        v[g] = e.rem_euclid(p as i64) as u8;
    }
    Ok(Element(v))
}

/// Parses a word such as `x1 x3^-1` and collects it in `pc`.
pub fn parse_element(pc: &PcPresentation, text: &str) -> Result<Element> {
    let w = parse_word(text, &BTreeMap::new())?;
    if let Some(&(g, _)) = w.iter().find(|(g, _)| *g >= pc.len()) {
        return Err(Error::UnknownGenerator { gen: g + 1, n: pc.len() });
    }
    Ok(pc.collect(&w))
}
