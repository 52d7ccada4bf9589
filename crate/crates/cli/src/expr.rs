//! Parser for divisor-class expressions over the named-class vocabulary:
//! `-K`, `f1 + 2*f3 - e4`, `K + L01`, `(3; 1,1,1)`.

use std::collections::BTreeMap;

use tricover::cover::Chi;
use tricover::picard::{BlowupSurface, DivisorClass};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Int(i64),
    Ident(String),
    Vector(DivisorClass),
}

fn tokenize(input: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let bytes: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '(' => {
                let close = bytes[i..]
                    .iter()
                    .position(|&c| c == ')')
                    .ok_or("unclosed vector literal")?
                    + i;
                let inner: String = bytes[i + 1..close].iter().collect();
                tokens.push(Token::Vector(parse_vector(&inner)?));
                i = close + 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = bytes[i..j].iter().collect();
                tokens.push(Token::Int(text.parse().map_err(|_| "bad integer")?));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == '_') {
                    j += 1;
                }
                tokens.push(Token::Ident(bytes[i..j].iter().collect()));
                i = j;
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(tokens)
}

/// `(d; m1, m2, ...)` without the parentheses.
pub fn parse_vector(inner: &str) -> Result<DivisorClass, String> {
    let (d_part, m_part) = inner
        .split_once(';')
        .ok_or("vector literal needs the form (d; m1,m2,...)")?;
    let d: i64 = d_part
        .trim()
        .parse()
        .map_err(|_| format!("bad degree `{}`", d_part.trim()))?;
    let m: Vec<i64> = if m_part.trim().is_empty() {
        Vec::new()
    } else {
        m_part
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| format!("bad coefficient `{}`", s.trim()))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(DivisorClass::new(d, m))
}

/// Parses a linear combination of named classes, bundle names and vector
/// literals on the given surface.
pub fn parse_class_expr(
    input: &str,
    surface: &BlowupSurface,
    bundles: Option<&BTreeMap<Chi, DivisorClass>>,
) -> Result<DivisorClass, String> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err("empty class expression".into());
    }

    let resolve = |name: &str| -> Result<DivisorClass, String> {
        if let Some(rest) = name.strip_prefix('L') {
            if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) {
                let mut digits = rest.chars().map(|c| c.to_digit(10).unwrap() as u8);
                let chi = Chi::new(digits.next().unwrap(), digits.next().unwrap())
                    .map_err(|e| e.to_string())?;
                return match bundles.and_then(|b| b.get(&chi)) {
                    Some(class) => Ok(class.clone()),
                    None => Err(format!("bundle {name} is not defined by this spec")),
                };
            }
        }
        if name.contains('_') {
            return Err(format!(
                "`{name}` names a branch component; its class is the pencil class `f<i>`"
            ));
        }
        surface.named_class(name).map_err(|e| e.to_string())
    };

    let mut acc = surface.zero();
    let mut pending_sign: Option<i64> = Some(1); // leading sign defaults to +
    let mut i = 0;
    while i < tokens.len() {
        match &tokens[i] {
            Token::Plus => {
                if pending_sign.is_some() {
                    return Err("misplaced `+`".into());
                }
                pending_sign = Some(1);
                i += 1;
            }
            Token::Minus => match pending_sign {
                Some(s) => {
                    pending_sign = Some(-s);
                    i += 1;
                }
                None => {
                    pending_sign = Some(-1);
                    i += 1;
                }
            },
            _ => {
                let sign = pending_sign
                    .take()
                    .ok_or("missing `+` or `-` between terms")?;
                // optional integer coefficient, optional `*`
                let mut coeff = 1i64;
                if let Token::Int(k) = tokens[i] {
                    coeff = k;
                    i += 1;
                    if i < tokens.len() && tokens[i] == Token::Star {
                        i += 1;
                    }
                    if i >= tokens.len() || matches!(tokens[i], Token::Plus | Token::Minus) {
                        if coeff == 0 {
                            continue; // a bare 0 is the zero class
                        }
                        return Err("a bare integer is not a class; write e.g. `2*f1`".into());
                    }
                }
                let class = match &tokens[i] {
                    Token::Ident(name) => resolve(name)?,
                    Token::Vector(v) => {
                        if v.multiplicities().len() != surface.point_count() {
                            return Err(format!(
                                "vector literal has {} coordinates, surface has {} points",
                                v.multiplicities().len(),
                                surface.point_count()
                            ));
                        }
                        v.clone()
                    }
                    Token::Star => return Err("misplaced `*`".into()),
                    Token::Int(_) => return Err("unexpected integer".into()),
                    Token::Plus | Token::Minus => unreachable!(),
                };
                i += 1;
                acc = acc
                    .checked_add(&class.scaled(sign * coeff))
                    .map_err(|e| e.to_string())?;
            }
        }
    }
    if pending_sign.is_some() {
        return Err("dangling sign at the end of the expression".into());
    }
    Ok(acc)
}
