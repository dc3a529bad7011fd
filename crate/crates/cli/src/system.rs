//! The system-definition file.
//!
//! ```text
//! file      := { line '\n' }
//! line      := blank | '#' comment | setting | generator | shear | form
//! setting   := 'n' '=' INT
//!            | 'order' '=' INT
//!            | 'degree-bound' [ '@' INT ] '=' INT
//! generator := 'f' INT [ '@' INT ] '=' poly      f3@1 is the hbar^1 coefficient of F3
//! shear     := ( 'S' | 'T' ) '=' poly            S(q) position shear, T(p) momentum shear
//! form      := 'form' '[' gens ']' '=' poly      gens: 1 | dq1^dp2^...
//! ```
//!
//! `n` must be given. Generators must be numbered `1..k` without gaps; an
//! index may carry several `@` coefficient lines. A trailing `#` starts a
//! comment anywhere on a line.

use std::collections::BTreeMap;
use std::fmt;

use qlift_core::derham::KForm;
use qlift_core::lift::Shear;
use qlift_core::polyring::{HSeries, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SystemError {
    /// One-based line, or 0 for problems with the file as a whole.
    pub line: usize,
    /// One-based column, when known.
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            _ if self.line == 0 => f.write_str(&self.message),
            Some(c) => write!(f, "line {}, column {}: {}", self.line, c, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub n: usize,
    /// Generator `i` as a series; its truncation is the highest `@` order given.
    pub generators: Vec<HSeries>,
    pub order: Option<usize>,
    pub degree_bound: Option<u32>,
    pub degree_bound_at: BTreeMap<usize, u32>,
    pub shears: Vec<Shear>,
    pub form: Option<KForm>,
}

impl SystemFile {
    /// The classical system: `hbar^0` parts of the generators.
    pub fn symbols(&self) -> Vec<Poly> {
        self.generators.iter().map(|s| s.symbol().clone()).collect()
    }

    pub fn parse(text: &str) -> Result<SystemFile, SystemError> {
        let mut raw = Vec::new();
        let mut n = None;
        let mut sys = SystemFile {
            n: 0,
            generators: Vec::new(),
            order: None,
            degree_bound: None,
            degree_bound_at: BTreeMap::new(),
            shears: Vec::new(),
            form: None,
        };
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let body = full.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some(eq) = body.find('=') else {
                return Err(err(line, None, "expected `key = value`"));
            };
            let key = body[..eq].trim();
            let value_start = eq + 1 + (body[eq + 1..].len() - body[eq + 1..].trim_start().len());
            let value = body[eq + 1..].trim();
            if value.is_empty() {
                return Err(err(line, Some(eq + 2), "missing value"));
            }
            let (name, at) = match key.split_once('@') {
                Some((k, a)) => (k.trim(), Some(parse_int(a.trim(), line)?)),
                None => (key, None),
            };
            match name {
                "n" if at.is_none() => {
                    if n.is_some() {
                        return Err(err(line, None, "`n` given twice"));
                    }
                    let v = parse_int(value, line)?;
                    if v == 0 {
                        return Err(err(line, None, "`n` must be positive"));
                    }
                    n = Some(v);
                }
                "order" if at.is_none() => sys.order = Some(parse_int(value, line)?),
                "degree-bound" => {
                    let b = u32::try_from(parse_int(value, line)?)
                        .map_err(|_| err(line, None, "degree bound too large"))?;
                    match at {
                        Some(l) => {
                            sys.degree_bound_at.insert(l, b);
                        }
                        None => sys.degree_bound = Some(b),
                    }
                }
                _ => raw.push(RawLine {
                    line,
                    key: name.to_string(),
                    at,
                    value: value.to_string(),
                    column: value_start + 1,
                }),
            }
        }
        sys.n = n.ok_or_else(|| err(0, None, "missing `n = ...` line"))?;
        let mut coeffs: BTreeMap<usize, BTreeMap<usize, Poly>> = BTreeMap::new();
        for r in raw {
            let poly = r.poly(sys.n)?;
            if let Some(idx) = r
                .key
                .strip_prefix('f')
                .filter(|_| !r.key.starts_with("form["))
            {
                let i: usize =
                    idx.parse().ok().filter(|&i| i >= 1).ok_or_else(|| {
                        err(r.line, None, format!("bad generator name `{}`", r.key))
                    })?;
                let slot = coeffs.entry(i).or_default();
                if slot.insert(r.at.unwrap_or(0), poly).is_some() {
                    return Err(err(r.line, None, format!("`{}` given twice", r.key)));
                }
                continue;
            }
            if r.at.is_some() {
                return Err(err(
                    r.line,
                    None,
                    format!("`@` is not allowed on `{}`", r.key),
                ));
            }
            match r.key.as_str() {
                "S" => sys.shears.push(Shear::Position(poly)),
                "T" => sys.shears.push(Shear::Momentum(poly)),
                k => {
                    let Some(gens) = k.strip_prefix("form[").and_then(|g| g.strip_suffix(']'))
                    else {
                        return Err(err(r.line, None, format!("unknown key `{k}`")));
                    };
                    let vars =
                        parse_form_generators(gens, sys.n).map_err(|m| err(r.line, None, m))?;
                    let term = KForm::monomial(poly, &vars)
                        .map_err(|e| err(r.line, None, e.to_string()))?;
                    sys.form = Some(match sys.form.take() {
                        None => term,
                        Some(a) => a
                            .add(&term)
                            .map_err(|_| err(r.line, None, "form terms must share one degree"))?,
                    });
                }
            }
        }
        for (expected, (&i, by_order)) in (1..).zip(&coeffs) {
            if i != expected {
                return Err(err(0, None, format!("generator f{expected} is missing")));
            }
            let top = *by_order.keys().next_back().expect("nonempty");
            let mut s = HSeries::zero(sys.n, top);
            for (&k, p) in by_order {
                s.set_coeff(k, p.clone());
            }
            sys.generators.push(s);
        }
        Ok(sys)
    }
}

struct RawLine {
    line: usize,
    key: String,
    at: Option<usize>,
    value: String,
    column: usize,
}

impl RawLine {
    fn poly(&self, n: usize) -> Result<Poly, SystemError> {
        Poly::parse(&self.value, n).map_err(|e| {
            let d = &e.diagnostics[0];
            err(self.line, Some(self.column + d.position), d.message.clone())
        })
    }
}

fn err(line: usize, column: Option<usize>, message: impl Into<String>) -> SystemError {
    SystemError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_int(s: &str, line: usize) -> Result<usize, SystemError> {
    s.parse().map_err(|_| {
        err(
            line,
            None,
            format!("expected a nonnegative integer, found `{s}`"),
        )
    })
}

/// `1` for a 0-form, otherwise `dq1^dp2^...`.
fn parse_form_generators(gens: &str, n: usize) -> Result<Vec<Var>, String> {
    let gens = gens.trim();
    if gens == "1" {
        return Ok(Vec::new());
    }
    gens.split('^')
        .map(|g| {
            let g = g.trim();
            let v = g
                .strip_prefix('d')
                .ok_or_else(|| format!("bad form generator `{g}`"))?;
            let (kind, idx) = v.split_at(v.len().min(1));
            let i: usize = idx
                .parse()
                .ok()
                .filter(|&i| (1..=n).contains(&i))
                .ok_or_else(|| format!("bad form generator `{g}`"))?;
            match kind {
                "q" => Ok(Var::Q(i - 1)),
                "p" => Ok(Var::P(i - 1)),
                _ => Err(format!("bad form generator `{g}`")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_settings_and_generators() {
        let sys = SystemFile::parse(
            "# example 2\nn = 2\norder = 4\ndegree-bound = 6\ndegree-bound@1 = 8\nf1 = p1*q1\nf2 = p2*q2  # second\nf2@1 = p1\n",
        )
        .unwrap();
        assert_eq!(sys.n, 2);
        assert_eq!(sys.order, Some(4));
        assert_eq!(sys.degree_bound, Some(6));
        assert_eq!(sys.degree_bound_at.get(&1), Some(&8));
        assert_eq!(sys.generators.len(), 2);
        assert_eq!(sys.generators[1].truncation(), 1);
        assert_eq!(sys.generators[1].coeff(1).to_string(), "p1");
        assert_eq!(sys.symbols()[0].to_string(), "q1*p1");
    }

    #[test]
    fn reports_expression_errors_with_columns() {
        let e = SystemFile::parse("n = 1\nf1 = p1 + q7\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, Some(11));
        let e = SystemFile::parse("n = 1\nf1 = (p1\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rejects_gaps_and_unknown_keys() {
        assert!(SystemFile::parse("n = 1\nf2 = p1\n").is_err());
        assert!(SystemFile::parse("n = 1\ng1 = p1\n").is_err());
        assert!(SystemFile::parse("f1 = p1\n").is_err());
        assert!(SystemFile::parse("n = 1\nf1 = p1\nf1 = q1\n").is_err());
    }

    #[test]
    fn reads_shears_and_forms() {
        let sys = SystemFile::parse(
            "n = 2\nS = q1^2*q2\nT = p1^2\nf1 = p1*q1\nf2 = p2*q2\nform[dq1] = p1\nform[dp2] = q1\n",
        )
        .unwrap();
        assert_eq!(sys.shears.len(), 2);
        assert_eq!(sys.form.unwrap().to_string(), "(p1)*dq1 + (q1)*dp2");
        assert!(SystemFile::parse("n = 1\nform[dq1] = p1\nform[1] = q1\n").is_err());
    }
}
