//! Textual ring specs and element literals.
//!
//! Ring specs: `Z:<n>`, `GF:<p>`, `M:<k>:<base>` (nestable), `Q`.
//!
//! Element literals: integers for `Z`/`GF` (negative values are reduced),
//! integers or fractions such as `-1/2` for `Q`, and bracketed rows such as
//! `[[1,0],[0,1]]` for matrices, with matrix entries written in the base
//! ring's grammar. Whitespace between tokens is ignored. Formatting always
//! produces the canonical spelling: least non-negative residues, reduced
//! fractions, no spaces.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::{Element, Ring, RingKind, Value};

pub fn parse_ring(text: &str) -> Result<Ring> {
    let mut cursor = Cursor::new(text);
    cursor.skip_ws();
    let ring = ring_spec(&mut cursor)?;
    cursor.skip_ws();
    cursor.expect_end()?;
    Ok(ring)
}

fn ring_spec(c: &mut Cursor) -> Result<Ring> {
    let start = c.column();
    if c.eat_str("GF:") {
        let p = c.unsigned()?;
        Ring::prime_field(p).map_err(|e| Error::parse(1, start, e.to_string()))
    } else if c.eat_str("Z:") {
        let n = c.unsigned()?;
        Ring::modular(n).map_err(|e| Error::parse(1, start, e.to_string()))
    } else if c.eat_str("M:") {
        let k = c.unsigned()?;
        if !c.eat(':') {
            return Err(c.error("expected ':' after matrix dimension"));
        }
        let base = ring_spec(c)?;
        let dim = usize::try_from(k).map_err(|_| Error::parse(1, start, "dimension too large"))?;
        Ring::matrix(&base, dim).map_err(|e| Error::parse(1, start, e.to_string()))
    } else if c.eat('Q') {
        Ok(Ring::rationals())
    } else {
        Err(c.error("expected a ring spec: Z:<n>, GF:<p>, M:<k>:<base> or Q"))
    }
}

/// Parses one element literal of `ring`. Errors report line 1 and the
/// 1-based column of the offending character.
pub fn parse_element(ring: &Ring, text: &str) -> Result<Element> {
    let mut cursor = Cursor::new(text);
    cursor.skip_ws();
    let value = element_value(&mut cursor, ring)?;
    cursor.skip_ws();
    cursor.expect_end()?;
    Ok(ring.wrap(value))
}

fn element_value(c: &mut Cursor, ring: &Ring) -> Result<Value> {
    match ring.kind() {
        RingKind::ModularInt(_) | RingKind::PrimeField(_) => {
            if c.peek() == Some('[') {
                return Err(c.error(format!("expected an integer for {ring}")));
            }
            let n = c.integer()?;
            if c.peek() == Some('/') {
                return Err(c.error(format!("fractions are not literals of {ring}")));
            }
            Ok(ring.int_value(&n))
        }
        RingKind::Rationals => {
            let num = c.integer()?;
            if c.eat('/') {
                let at = c.column();
                let den = c.integer()?;
                if den.is_zero() {
                    return Err(Error::parse(1, at, "zero denominator"));
                }
                Ok(Value::Fraction(BigRational::new(num, den)))
            } else {
                Ok(Value::Fraction(BigRational::from_integer(num)))
            }
        }
        RingKind::Matrix { base, dim } => {
            let mut entries = Vec::with_capacity(dim * dim);
            c.expect_char('[')?;
            for row in 0..*dim {
                if row > 0 {
                    c.expect_char(',')?;
                }
                c.expect_char('[')?;
                for col in 0..*dim {
                    if col > 0 {
                        c.expect_char(',')?;
                    }
                    c.skip_ws();
                    entries.push(element_value(c, base)?);
                }
                c.skip_ws();
                if c.peek() == Some(',') {
                    return Err(c.error(format!("row has more than {dim} entries")));
                }
                c.expect_char(']')?;
            }
            c.skip_ws();
            if c.peek() == Some(',') {
                return Err(c.error(format!("matrix has more than {dim} rows")));
            }
            c.expect_char(']')?;
            Ok(Value::Matrix(entries.into_boxed_slice()))
        }
    }
}

pub(crate) fn write_value(f: &mut fmt::Formatter<'_>, ring: &Ring, value: &Value) -> fmt::Result {
    match (ring.kind(), value) {
        (_, Value::Residue(r)) => write!(f, "{r}"),
        (_, Value::Fraction(q)) => {
            if q.is_integer() {
                write!(f, "{}", q.numer())
            } else {
                write!(f, "{}/{}", q.numer(), q.denom())
            }
        }
        (RingKind::Matrix { base, dim }, Value::Matrix(entries)) => {
            f.write_str("[")?;
            for (row, chunk) in entries.chunks(*dim).enumerate() {
                if row > 0 {
                    f.write_str(",")?;
                }
                f.write_str("[")?;
                for (col, v) in chunk.iter().enumerate() {
                    if col > 0 {
                        f.write_str(",")?;
                    }
                    write_value(f, base, v)?;
                }
                f.write_str("]")?;
            }
            f.write_str("]")
        }
        _ => unreachable!("payload does not match {ring}"),
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let found = match self.peek() {
            Some(ch) => format!(" (found '{ch}')"),
            None => " (found end of input)".to_string(),
        };
        Error::parse(1, self.column(), format!("{}{found}", message.into()))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .copied()
                .eq(s.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect_char(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{ch}'")))
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn unsigned(&mut self) -> Result<u64> {
        let at = self.column();
        let digits = self.digits()?;
        digits
            .parse()
            .map_err(|_| Error::parse(1, at, format!("{digits} does not fit in 64 bits")))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        let digits = self.digits()?;
        let magnitude: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -magnitude } else { magnitude })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ring_specs_round_trip() {
        for spec in ["Z:6", "GF:7", "M:2:Z:2", "M:2:M:2:GF:3", "Q", "M:3:Q"] {
            assert_eq!(parse_ring(spec).unwrap().to_string(), spec);
        }
    }

    #[test]
    fn ring_spec_errors_carry_columns() {
        assert_eq!(
            parse_ring("GF:6"),
            Err(Error::Parse {
                line: 1,
                column: 1,
                message: "invalid ring: 6 is not prime".into()
            })
        );
        match parse_ring("M:2;Z:2") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_ring("Z:1").is_err());
        assert!(parse_ring("R").is_err());
    }

    #[test]
    fn element_literals() {
        let z6 = parse_ring("Z:6").unwrap();
        assert_eq!(parse_element(&z6, "-1").unwrap().to_string(), "5");
        assert_eq!(parse_element(&z6, " 14 ").unwrap().to_string(), "2");
        let q = Ring::rationals();
        assert_eq!(parse_element(&q, "6/-8").unwrap().to_string(), "-3/4");
        assert_eq!(parse_element(&q, "4/2").unwrap().to_string(), "2");
        let m = parse_ring("M:2:Z:2").unwrap();
        assert_eq!(
            parse_element(&m, "[ [1, 0] , [0,3] ]").unwrap().to_string(),
            "[[1,0],[0,1]]"
        );
    }

    #[test]
    fn malformed_literals_report_column() {
        let m = parse_ring("M:2:Z:2").unwrap();
        let column = |text: &str| match parse_element(&m, text) {
            Err(Error::Parse { column, .. }) => column,
            other => panic!("{text}: {other:?}"),
        };
        assert_eq!(column("[[1,0],[0,1]"), 13);
        assert_eq!(column("[[1,0,1],[0,1]]"), 6);
        assert_eq!(column("[[1,x],[0,1]]"), 5);
        assert_eq!(column("[[1,0],[0,1]]]"), 14);
        let q = Ring::rationals();
        assert!(matches!(
            parse_element(&q, "1/0"),
            Err(Error::Parse { column: 3, .. })
        ));
        let z = parse_ring("Z:5").unwrap();
        assert!(parse_element(&z, "1/2").is_err());
    }

    fn ring_strategy() -> impl Strategy<Value = Ring> {
        prop_oneof![
            Just(parse_ring("Z:6").unwrap()),
            Just(parse_ring("M:2:Z:2").unwrap()),
            Just(parse_ring("M:2:GF:3").unwrap()),
            Just(parse_ring("M:2:M:2:Z:2").unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(ring in ring_strategy(), seed in any::<u64>()) {
            let size = ring.size().unwrap();
            let e = ring.element_at(seed % size);
            prop_assert_eq!(parse_element(&ring, &e.to_string()).unwrap(), e);
        }

        #[test]
        fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
            let q = Ring::rationals();
            let e = parse_element(&q, &format!("{n}/{d}")).unwrap();
            prop_assert_eq!(parse_element(&q, &e.to_string()).unwrap(), e);
        }
    }
}
