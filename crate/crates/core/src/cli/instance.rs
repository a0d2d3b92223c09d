//! The instance file format:
//!
//! ```text
//! # comment
//! d 4
//! char 32003
//! side S
//! gen 1 2
//! gen 3 4
//! ```
//!
//! `char` defaults to 0 and `side` to `E`. Indices are 1-based; an empty
//! `gen` line is the unit ideal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::FieldConfig;
use crate::grading::{MonomialIdeal, Side, Subset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceFile {
    pub d: usize,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub side: Side,
    /// Generators in file order, 0-based internally.
    #[serde(serialize_with = "gens_one_based")]
    pub gens: Vec<Subset>,
}

fn gens_one_based<S: serde::Serializer>(g: &[Subset], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(g.iter().map(|x| x.to_one_based()))
}

impl InstanceFile {
    pub fn new(d: usize, characteristic: u64, side: Side, gens: Vec<Subset>) -> Self {
        Self {
            d,
            characteristic,
            side,
            gens,
        }
    }

    pub fn ideal(&self, side: Side) -> MonomialIdeal {
        MonomialIdeal::new(side, self.d, self.gens.iter().copied())
    }

    pub fn field(&self) -> Result<FieldConfig> {
        FieldConfig::new(self.characteristic)
    }

    pub fn emit(&self) -> String {
        let mut out = format!(
            "d {}\nchar {}\nside {}\n",
            self.d,
            self.characteristic,
            match self.side {
                Side::E => "E",
                Side::S => "S",
            }
        );
        for g in &self.gens {
            out.push_str("gen");
            for i in g.to_one_based() {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        }
        out
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn single_value<'a>(line: usize, key: &str, rest: &[&'a str]) -> Result<&'a str> {
    match rest {
        [v] => Ok(v),
        _ => Err(parse_err(line, format!("`{key}` takes exactly one value"))),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut d: Option<usize> = None;
    let mut characteristic = 0u64;
    let mut side = Side::E;
    let mut raw_gens: Vec<(usize, Vec<i64>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let (key, rest) = (words[0], &words[1..]);
        match key {
            "d" => {
                if d.is_some() {
                    return Err(parse_err(line, "`d` given twice"));
                }
                let v = single_value(line, key, rest)?;
                let n: usize = v
                    .parse()
                    .map_err(|_| parse_err(line, format!("`{v}` is not a number of variables")))?;
                if n == 0 || n > 12 {
                    return Err(parse_err(line, "d must be between 1 and 12"));
                }
                d = Some(n);
            }
            "char" => {
                let v = single_value(line, key, rest)?;
                let c: u64 = v
                    .parse()
                    .map_err(|_| parse_err(line, format!("`{v}` is not a characteristic")))?;
                FieldConfig::new(c)?;
                characteristic = c;
            }
            "side" => {
                side = match single_value(line, key, rest)? {
                    "E" => Side::E,
                    "S" => Side::S,
                    other => return Err(parse_err(line, format!("side must be E or S, not `{other}`"))),
                };
            }
            "gen" => {
                let idx = rest
                    .iter()
                    .map(|w| w.parse::<i64>().map_err(|_| parse_err(line, format!("`{w}` is not an index"))))
                    .collect::<Result<Vec<_>>>()?;
                raw_gens.push((line, idx));
            }
            other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
        }
    }
    let d = d.ok_or_else(|| parse_err(0, "missing `d` line"))?;
    let mut gens = Vec::new();
    for (line, idx) in raw_gens {
        let mut s = Subset::EMPTY;
        for &i in &idx {
            if i < 1 || i > d as i64 || s.contains((i - 1) as usize) {
                return Err(Error::BadIndex { line, index: i });
            }
            s = s.with((i - 1) as usize);
        }
        gens.push(s);
    }
    Ok(InstanceFile {
        d,
        characteristic,
        side,
        gens,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let a = parse_instance("d 3\nchar 0\nside E\ngen 1 2").unwrap();
        assert_eq!(a.gens, vec![Subset::from_indices(&[0, 1])]);
        let b = parse_instance("d 4\nchar 32003\nside S\ngen 1 2\ngen 3 4").unwrap();
        assert_eq!(b.side, Side::S);
        assert_eq!(b.characteristic, 32003);
        assert_eq!(b.gens.len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_instance("d 2\ngen 1 1"),
            Err(Error::BadIndex { line: 2, index: 1 })
        ));
        assert!(matches!(parse_instance("d 2\ngen 3"), Err(Error::BadIndex { .. })));
        assert!(matches!(parse_instance("d 2\nchar 6"), Err(Error::BadChar(6))));
        assert!(matches!(parse_instance("d 2\nfoo"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_instance("gen 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_and_round_trip() {
        let text = "# a comment\n\nd 3   # trailing\nside S\ngen 2 1\n";
        let a = parse_instance(text).unwrap();
        let canon = a.emit();
        assert_eq!(canon, "d 3\nchar 0\nside S\ngen 1 2\n");
        assert_eq!(parse_instance(&canon).unwrap(), a);
        assert_eq!(parse_instance(&canon).unwrap().emit(), canon);
    }
}
