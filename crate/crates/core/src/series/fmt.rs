//! Textual and JSON forms of Laurent series. Both round-trip through the
//! parsers given the ambient field.
//!
//! Text:  `2*u^-3 + (g+1)*u^5 + O(u^200)`
//! JSON:  `{"scale": 2, "val": -3, "prec": 200, "terms": [[-3, "2"]]}`
//! An exact series omits the O-term (JSON `prec: null`).

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{parse_fq, Field};
use crate::series::{is_inf, Laurent, PREC_INF};

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (e, c) in self.terms() {
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            let cs = c.to_string();
            let coeff_part = if cs.contains('+') {
                format!("({})", cs)
            } else {
                cs.clone()
            };
            if *e == 0 {
                write!(f, "{}", coeff_part)?;
            } else if c.is_one() {
                write!(f, "u^{}", e)?;
            } else {
                write!(f, "{}*u^{}", coeff_part, e)?;
            }
        }
        if !is_inf(self.prec()) {
            if wrote {
                write!(f, " + ")?;
            }
            write!(f, "O(u^{})", self.prec())?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses the `Display` form of a Laurent series.
pub fn parse_laurent(field: &Field, s: &str) -> Result<Laurent> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty series".into()));
    }
    if compact == "0" {
        return Ok(Laurent::zero(field));
    }
    let mut prec = PREC_INF;
    let mut terms = Vec::new();
    let chars: Vec<char> = compact.chars().collect();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut pieces = Vec::new();
    for (i, &ch) in chars.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 && i > start => {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(chars[start..].iter().collect::<String>());

    for piece in pieces {
        if piece.is_empty() {
            return Err(Error::Parse(format!("bad series '{s}'")));
        }
        if let Some(rest) = piece.strip_prefix("O(u^") {
            let num = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("bad O-term '{piece}'")))?;
            prec = num
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad precision '{num}'")))?;
            continue;
        }
        let (coeff_str, exp) = match piece.find('u') {
            None => (piece.as_str(), 0i64),
            Some(idx) => {
                let head = piece[..idx].trim_end_matches('*');
                let tail = &piece[idx + 1..];
                let e = if tail.is_empty() {
                    1
                } else if let Some(stripped) = tail.strip_prefix('^') {
                    stripped
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent '{tail}'")))?
                } else {
                    return Err(Error::Parse(format!("bad term '{piece}'")));
                };
                (head, e)
            }
        };
        let coeff = if coeff_str.is_empty() {
            field.one()
        } else {
            parse_fq(
                field,
                coeff_str.trim_start_matches('(').trim_end_matches(')'),
            )?
        };
        terms.push((exp, coeff));
    }
    Ok(Laurent::from_terms(field, terms, prec))
}

/// JSON form per the series interface contract.
pub fn laurent_to_json(l: &Laurent) -> Value {
    let terms: Vec<Value> = l
        .terms()
        .iter()
        .map(|(e, c)| json!([e, c.to_string()]))
        .collect();
    json!({
        "scale": l.scale(),
        "val": if is_inf(l.val()) { Value::Null } else { json!(l.val()) },
        "prec": if is_inf(l.prec()) { Value::Null } else { json!(l.prec()) },
        "terms": terms,
    })
}

pub fn laurent_from_json(field: &Field, v: &Value) -> Result<Laurent> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("series JSON must be an object".into()))?;
    let scale = obj
        .get("scale")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Parse("missing scale".into()))?;
    let expected = field.order() as i64 - 1;
    if scale != expected {
        return Err(Error::ScaleMismatch(scale, expected));
    }
    let prec = match obj.get("prec") {
        None | Some(Value::Null) => PREC_INF,
        Some(p) => p
            .as_i64()
            .ok_or_else(|| Error::Parse("prec must be an integer or null".into()))?,
    };
    let terms_json = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing terms".into()))?;
    let mut terms = Vec::with_capacity(terms_json.len());
    for t in terms_json {
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse("each term must be [exp, coeff]".into()))?;
        let e = pair[0]
            .as_i64()
            .ok_or_else(|| Error::Parse("term exponent must be an integer".into()))?;
        let c = pair[1]
            .as_str()
            .ok_or_else(|| Error::Parse("term coefficient must be a string".into()))?;
        terms.push((e, parse_fq(field, c)?));
    }
    Ok(Laurent::from_terms(field, terms, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::series::Laurent;

    #[test]
    fn text_round_trip() {
        let f9 = make_field(3, 1, 2).unwrap();
        let s = Laurent::from_terms(
            &f9,
            vec![
                (-8, f9.from_prime(2)),
                (0, f9.generator()),
                (5, f9.generator().add(&f9.one())),
            ],
            200,
        );
        let text = s.to_string();
        let back = parse_laurent(&f9, &text).unwrap();
        assert_eq!(back, s, "round trip of '{text}'");
    }

    #[test]
    fn text_forms() {
        let f = make_field(3, 1, 1).unwrap();
        assert_eq!(Laurent::zero(&f).to_string(), "0");
        assert_eq!(Laurent::zero_at(&f, 10).to_string(), "O(u^10)");
        assert_eq!(Laurent::theta_image(&f).to_string(), "2*u^-2");
        assert_eq!(
            parse_laurent(&f, "2*u^-2").unwrap(),
            Laurent::theta_image(&f)
        );
    }

    #[test]
    fn json_round_trip() {
        let f9 = make_field(3, 1, 2).unwrap();
        for s in [
            Laurent::zero(&f9),
            Laurent::zero_at(&f9, 64),
            Laurent::from_terms(&f9, vec![(-3, f9.generator()), (7, f9.one())], 50),
            Laurent::one(&f9),
        ] {
            let v = laurent_to_json(&s);
            let back = laurent_from_json(&f9, &v).unwrap();
            assert_eq!(back, s, "round trip of {v}");
        }
    }

    #[test]
    fn json_rejects_wrong_scale() {
        let f3 = make_field(3, 1, 1).unwrap();
        let f9 = make_field(3, 1, 2).unwrap();
        let v = laurent_to_json(&Laurent::one(&f9));
        assert!(laurent_from_json(&f3, &v).is_err());
    }
}
