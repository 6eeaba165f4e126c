//! The plain-text map format:
//!
//! ```text
//! # comment
//! field = QQ            # or: GF 7
//! source = X0, X1, X2
//! target = T0, T1, T2, T3   # optional, defaults to T0..Tn
//! f0 = X0*X1*(X0 - X2)
//! f1 = ...
//! ```

use crate::error::{Error, Result};
use crate::map::{build_map_with_target, ParameterizedMap};
use crate::parse::parse_polynomial;
use crate::ring::Ring;
use crate::scalar::Field;

fn at(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

struct Entry<'a> {
    line: usize,
    /// 1-based column where the value starts.
    column: usize,
    value: &'a str,
}

fn parse_field(e: &Entry) -> Result<Field> {
    let v = e.value.trim();
    if v == "QQ" {
        return Ok(Field::Rational);
    }
    let Some(rest) = v.strip_prefix("GF") else {
        return Err(at(e.line, e.column, format!("unknown field {v:?}, expected QQ or GF p")));
    };
    let p: u32 = rest
        .trim()
        .parse()
        .map_err(|_| at(e.line, e.column, format!("bad characteristic {:?}", rest.trim())))?;
    Field::prime(p).map_err(|err| at(e.line, e.column, err.to_string()))
}

fn parse_names(e: &Entry) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in e.value.split(',') {
        let name = part.trim();
        let col = e.column + offset + (part.len() - part.trim_start().len());
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(at(e.line, col, format!("bad variable name {name:?}")));
        }
        if name.chars().next().unwrap().is_ascii_digit() {
            return Err(at(e.line, col, format!("variable name {name:?} starts with a digit")));
        }
        out.push(name.to_string());
        offset += part.len() + 1;
    }
    Ok(out)
}

pub fn parse_map_file(text: &str) -> Result<ParameterizedMap> {
    let mut field = None;
    let mut source = None;
    let mut target = None;
    let mut forms: Vec<Option<Entry>> = Vec::new();
    let last_line = text.lines().count() + 1;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap();
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(at(line, 1, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let value = &content[eq + 1..];
        let lead = value.len() - value.trim_start().len();
        let entry = Entry { line, column: eq + 2 + lead, value: value.trim() };
        let key_col = content.len() - content.trim_start().len() + 1;
        let duplicate = || at(line, key_col, format!("duplicate key {key:?}"));
        match key {
            "field" => {
                if field.replace(entry).is_some() {
                    return Err(duplicate());
                }
            }
            "source" => {
                if source.replace(entry).is_some() {
                    return Err(duplicate());
                }
            }
            "target" => {
                if target.replace(entry).is_some() {
                    return Err(duplicate());
                }
            }
            _ => {
                let idx = key
                    .strip_prefix('f')
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| at(line, key_col, format!("unknown key {key:?}")))?;
                if forms.len() <= idx {
                    forms.resize_with(idx + 1, || None);
                }
                if forms[idx].replace(entry).is_some() {
                    return Err(duplicate());
                }
            }
        }
    }
    let field_entry = field.ok_or_else(|| at(last_line, 1, "missing `field`"))?;
    let field = parse_field(&field_entry)?;
    let source_entry = source.ok_or_else(|| at(last_line, 1, "missing `source`"))?;
    let source_names = parse_names(&source_entry)?;
    let source_ring =
        Ring::new(&source_names, field).map_err(|e| at(source_entry.line, source_entry.column, e.to_string()))?;
    if forms.is_empty() {
        return Err(at(last_line, 1, "no forms f0, f1, ... given"));
    }
    let target_names = match &target {
        Some(e) => {
            let names = parse_names(e)?;
            if let Some(n) = names.iter().find(|n| source_names.contains(n)) {
                return Err(at(e.line, e.column, format!("target variable {n:?} is also a source variable")));
            }
            if names.len() != forms.len() {
                return Err(at(e.line, e.column, format!("{} target variables for {} forms", names.len(), forms.len())));
            }
            names
        }
        None => {
            let names: Vec<String> = (0..forms.len()).map(|j| format!("T{j}")).collect();
            if let Some(n) = names.iter().find(|n| source_names.contains(n)) {
                return Err(at(source_entry.line, source_entry.column, format!("source variable {n:?} clashes with the default target names")));
            }
            names
        }
    };
    let target_ring = Ring::new(&target_names, field)?;
    let mut polys = Vec::with_capacity(forms.len());
    for (j, e) in forms.iter().enumerate() {
        let e = e.as_ref().ok_or_else(|| at(last_line, 1, format!("missing form f{j}")))?;
        let p = parse_polynomial(&source_ring, e.value).map_err(|err| match err {
            Error::Parse { column, message, .. } => at(e.line, e.column + column - 1, message),
            other => other,
        })?;
        if !p.is_homogeneous() {
            return Err(Error::Inhomogeneous(format!("f{j} on line {} is not homogeneous", e.line)));
        }
        polys.push(p);
    }
    build_map_with_target(polys, &target_ring)
}

pub fn print_map_file(map: &ParameterizedMap) -> String {
    let mut out = String::new();
    out.push_str(&format!("field = {}\n", map.source().field()));
    out.push_str(&format!("source = {}\n", map.source().names().join(", ")));
    out.push_str(&format!("target = {}\n", map.target().names().join(", ")));
    for (j, f) in map.forms().iter().enumerate() {
        out.push_str(&format!("f{j} = {f}\n"));
    }
    out
}
