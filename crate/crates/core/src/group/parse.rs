//! Text forms: group descriptors and canonical element text.
//!
//! Descriptor grammar (whitespace-insensitive):
//!
//! ```text
//! group := free(N) | zn(N) | cyclic(N)
//!        | direct(group, group)
//!        | semidirect(zn(N), group, action=trivial|inversion)
//!        | central(free(N), z)
//! ```
//!
//! Element text by family:
//! * words: `e` or space-separated powers like `a3 B1` (uppercase = inverse);
//! * rank-1 lattices and residues: a plain integer;
//! * higher-rank lattices: `(1,-2)`;
//! * pairs / central / semidirect: parenthesized comma-separated components.

use super::{Action, Element, Group, GroupError};

/// Parses a group descriptor such as `semidirect(zn(1),cyclic(4),action=inversion)`.
pub fn parse_group(text: &str) -> Result<Group, GroupError> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (group, rest) = parse_group_inner(&cleaned)?;
    if !rest.is_empty() {
        return Err(GroupError::Parse(format!(
            "unexpected trailing input {rest:?} in group descriptor"
        )));
    }
    group.validate()?;
    Ok(group)
}

fn parse_group_inner(text: &str) -> Result<(Group, &str), GroupError> {
    let open = text
        .find('(')
        .ok_or_else(|| GroupError::Parse(format!("expected '(' in descriptor {text:?}")))?;
    let head = &text[..open];
    let rest = &text[open + 1..];
    match head {
        "free" => {
            let (n, rest) = parse_number(rest)?;
            let rest = expect(rest, ')')?;
            Ok((Group::Free(n), rest))
        }
        "zn" => {
            let (n, rest) = parse_number(rest)?;
            let rest = expect(rest, ')')?;
            Ok((Group::FreeAbelian(n), rest))
        }
        "cyclic" => {
            let (n, rest) = parse_number(rest)?;
            let rest = expect(rest, ')')?;
            Ok((Group::Cyclic(n), rest))
        }
        "direct" => {
            let (a, rest) = parse_group_inner(rest)?;
            let rest = expect(rest, ',')?;
            let (b, rest) = parse_group_inner(rest)?;
            let rest = expect(rest, ')')?;
            Ok((Group::Direct(Box::new(a), Box::new(b)), rest))
        }
        "semidirect" => {
            let (lattice, rest) = parse_group_inner(rest)?;
            let Group::FreeAbelian(rank) = lattice else {
                return Err(GroupError::Parse(
                    "semidirect base must be zn(N)".into(),
                ));
            };
            let rest = expect(rest, ',')?;
            let (finite, rest) = parse_group_inner(rest)?;
            let rest = expect(rest, ',')?;
            let rest = rest.strip_prefix("action=").ok_or_else(|| {
                GroupError::Parse("semidirect needs an action=... argument".into())
            })?;
            let (action, rest) = if let Some(r) = rest.strip_prefix("trivial") {
                (Action::Trivial, r)
            } else if let Some(r) = rest.strip_prefix("inversion") {
                (Action::Inversion, r)
            } else {
                return Err(GroupError::Parse(format!(
                    "unknown action in {rest:?}; expected trivial or inversion"
                )));
            };
            let rest = expect(rest, ')')?;
            Ok((
                Group::Semidirect {
                    rank,
                    finite: Box::new(finite),
                    action,
                },
                rest,
            ))
        }
        "central" => {
            let (inner, rest) = parse_group_inner(rest)?;
            let Group::Free(rank) = inner else {
                return Err(GroupError::Parse("central base must be free(N)".into()));
            };
            let rest = expect(rest, ',')?;
            let rest = rest
                .strip_prefix('z')
                .ok_or_else(|| GroupError::Parse("central second factor must be z".into()))?;
            let rest = expect(rest, ')')?;
            Ok((Group::Central(rank), rest))
        }
        other => Err(GroupError::Parse(format!("unknown group family {other:?}"))),
    }
}

fn parse_number(text: &str) -> Result<(u32, &str), GroupError> {
    let end = text
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(text.len());
    if end == 0 {
        return Err(GroupError::Parse(format!("expected a number in {text:?}")));
    }
    let n = text[..end]
        .parse::<u32>()
        .map_err(|e| GroupError::Parse(format!("bad number in descriptor: {e}")))?;
    Ok((n, &text[end..]))
}

fn expect(text: &str, c: char) -> Result<&str, GroupError> {
    text.strip_prefix(c)
        .ok_or_else(|| GroupError::Parse(format!("expected {c:?} at {text:?}")))
}

/// Renders the canonical text form of an element of `group`.
pub fn format_element(group: &Group, e: &Element) -> String {
    match (group, e) {
        (Group::Free(_), Element::Word(w)) => format_word(w),
        (Group::FreeAbelian(n), Element::Vector(v)) => format_vector(v, *n),
        (Group::Cyclic(_), Element::Residue(r)) => r.to_string(),
        (Group::Direct(a, b), Element::Pair(l, r)) => {
            format!("({},{})", format_element(a, l), format_element(b, r))
        }
        (Group::Central(n), Element::Central(w, c)) => {
            let word = Group::Free(*n);
            format!("({},{c})", format_element(&word, &Element::Word(w.clone())))
        }
        (Group::Semidirect { finite, .. }, Element::Semi(v, f)) => {
            let mut parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            parts.push(format_element(finite, f));
            format!("({})", parts.join(","))
        }
        _ => unreachable!("format_element called with mismatched payload"),
    }
}

fn format_word(w: &[i8]) -> String {
    if w.is_empty() {
        return "e".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let letter = w[i];
        let mut run = 0usize;
        while i < w.len() && w[i] == letter {
            run += 1;
            i += 1;
        }
        let base = b'a' + letter.unsigned_abs() - 1;
        let ch = if letter > 0 {
            base as char
        } else {
            base.to_ascii_uppercase() as char
        };
        parts.push(format!("{ch}{run}"));
    }
    parts.join(" ")
}

/// Parses the canonical text form of an element of `group`.
pub fn parse_element(group: &Group, text: &str) -> Result<Element, GroupError> {
    let text = text.trim();
    if text == "e" {
        return Ok(group.identity());
    }
    let e = match group {
        Group::Free(n) => Element::Word(parse_word(text, *n)?),
        Group::FreeAbelian(n) => {
            if *n == 1 && !text.starts_with('(') {
                Element::Vector(vec![parse_int(text)?])
            } else {
                let parts = split_components(text, *n as usize)?;
                let coords = parts
                    .iter()
                    .map(|p| parse_int(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Element::Vector(coords)
            }
        }
        Group::Cyclic(m) => {
            let value = parse_int(text)?;
            Element::Residue(value.rem_euclid(i64::from(*m)) as u32)
        }
        Group::Direct(a, b) => {
            let parts = split_components(text, 2)?;
            Element::pair(parse_element(a, &parts[0])?, parse_element(b, &parts[1])?)
        }
        Group::Central(n) => {
            let parts = split_components(text, 2)?;
            let word = parse_word(parts[0].trim(), *n)?;
            Element::Central(word, parse_int(&parts[1])?)
        }
        Group::Semidirect { rank, finite, .. } => {
            let parts = split_components(text, *rank as usize + 1)?;
            let vector = parts[..*rank as usize]
                .iter()
                .map(|p| parse_int(p))
                .collect::<Result<Vec<_>, _>>()?;
            let fin = parse_element(finite, &parts[*rank as usize])?;
            Element::Semi(vector, Box::new(fin))
        }
    };
    group.check_element(&e)?;
    Ok(e)
}

fn parse_word(text: &str, rank: u32) -> Result<Vec<i8>, GroupError> {
    if text == "e" {
        return Ok(Vec::new());
    }
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let mut chars = token.chars();
        let ch = chars
            .next()
            .ok_or_else(|| GroupError::Parse("empty word token".into()))?;
        if !ch.is_ascii_alphabetic() {
            return Err(GroupError::Parse(format!(
                "word token {token:?} must start with a letter"
            )));
        }
        let index = (ch.to_ascii_lowercase() as u8 - b'a') as u32 + 1;
        if index > rank {
            return Err(GroupError::Parse(format!(
                "letter {ch:?} outside rank {rank}"
            )));
        }
        let exponent_text = chars.as_str();
        let exponent: usize = if exponent_text.is_empty() {
            1
        } else {
            exponent_text.parse().map_err(|e| {
                GroupError::Parse(format!("bad exponent in token {token:?}: {e}"))
            })?
        };
        if exponent == 0 {
            return Err(GroupError::Parse(format!(
                "exponent in {token:?} must be positive"
            )));
        }
        let letter = if ch.is_ascii_lowercase() {
            index as i8
        } else {
            -(index as i8)
        };
        letters.extend(std::iter::repeat(letter).take(exponent));
    }
    Ok(super::element::reduce_word(letters))
}

fn parse_int(text: &str) -> Result<i64, GroupError> {
    text.trim()
        .parse::<i64>()
        .map_err(|e| GroupError::Parse(format!("bad integer {text:?}: {e}")))
}

fn format_vector(v: &[i64], rank: u32) -> String {
    if rank == 1 {
        v[0].to_string()
    } else {
        let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Splits `(a,b,c)` into top-level components, respecting nested parens.
fn split_components(text: &str, expected: usize) -> Result<Vec<String>, GroupError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| {
            GroupError::Parse(format!("expected parenthesized tuple, got {text:?}"))
        })?;
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    GroupError::Parse(format!("unbalanced parens in {text:?}"))
                })?;
            }
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(GroupError::Parse(format!("unbalanced parens in {text:?}")));
    }
    parts.push(inner[start..].trim().to_string());
    if parts.len() != expected {
        return Err(GroupError::Parse(format!(
            "expected {expected} components in {text:?}, found {}",
            parts.len()
        )));
    }
    Ok(parts)
}
