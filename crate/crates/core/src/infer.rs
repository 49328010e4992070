//! Token parsers and all-or-nothing semantic type inference.

use chrono::NaiveDate;

use crate::table::{ColumnData, SemanticType};

/// `true` / `false`, case-insensitive, surrounding whitespace ignored.
pub fn parse_bool_token(token: &str) -> Option<bool> {
    let t = token.trim();
    if t.eq_ignore_ascii_case("true") {
        Some(true)
    } else if t.eq_ignore_ascii_case("false") {
        Some(false)
    } else {
        None
    }
}

/// Optional sign followed by ASCII digits. `None` on overflow.
pub fn parse_int_token(token: &str) -> Option<i64> {
    let t = token.trim();
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Decimal or scientific notation; the result must be finite.
pub fn parse_float_token(token: &str) -> Option<f64> {
    let t = token.trim();
    // f64::from_str also accepts "inf"/"nan" spellings; only allow numeric text.
    if t.is_empty()
        || !t
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'))
        || !t.bytes().any(|b| b.is_ascii_digit())
    {
        return None;
    }
    t.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn fixed_digits(bytes: &[u8]) -> Option<u32> {
    if bytes.is_empty() || !bytes.iter().all(u8::is_ascii_digit) {
        return None;
    }
    Some(bytes.iter().fold(0u32, |acc, b| acc * 10 + u32::from(b - b'0')))
}

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DD HH:MM[:SS]` and `YYYY-MM-DDTHH:MM[:SS][Z]`.
/// Returns UTC epoch milliseconds.
pub fn parse_timestamp_token(token: &str) -> Option<i64> {
    let t = token.trim().as_bytes();
    if t.len() < 10 || t[4] != b'-' || t[7] != b'-' {
        return None;
    }
    let year = fixed_digits(&t[0..4])?;
    let month = fixed_digits(&t[5..7])?;
    let day = fixed_digits(&t[8..10])?;
    let date = NaiveDate::from_ymd_opt(year as i32, month, day)?;

    let (hour, minute, second) = if t.len() == 10 {
        (0, 0, 0)
    } else {
        let sep = t[10];
        let mut rest = &t[11..];
        if sep == b'T' {
            rest = rest.strip_suffix(b"Z").unwrap_or(rest);
        } else if sep != b' ' {
            return None;
        }
        match rest.len() {
            5 if rest[2] == b':' => (
                fixed_digits(&rest[0..2])?,
                fixed_digits(&rest[3..5])?,
                0,
            ),
            8 if rest[2] == b':' && rest[5] == b':' => (
                fixed_digits(&rest[0..2])?,
                fixed_digits(&rest[3..5])?,
                fixed_digits(&rest[6..8])?,
            ),
            _ => return None,
        }
    };
    let dt = date.and_hms_opt(hour, minute, second)?;
    Some(dt.and_utc().timestamp_millis())
}

/// Renders epoch milliseconds in an accepted timestamp format: the bare date at
/// midnight, `YYYY-MM-DD HH:MM:SS` otherwise (sub-second parts are dropped).
pub fn format_timestamp(ms: i64) -> String {
    match chrono::DateTime::from_timestamp_millis(ms) {
        Some(dt) => {
            let naive = dt.naive_utc();
            if naive.time() == chrono::NaiveTime::MIN {
                naive.format("%Y-%m-%d").to_string()
            } else {
                naive.format("%Y-%m-%d %H:%M:%S").to_string()
            }
        }
        None => ms.to_string(),
    }
}

/// Picks the first type in precedence order (boolean, integer, float,
/// temporal) that accepts every non-null token; categorical otherwise. An
/// all-null column is categorical.
pub fn infer_semantic_type<S: AsRef<str>>(raw: &[Option<S>]) -> SemanticType {
    let mut tokens = raw.iter().flatten().map(AsRef::as_ref).peekable();
    if tokens.peek().is_none() {
        return SemanticType::Categorical;
    }
    let mut bool_ok = true;
    let mut int_ok = true;
    let mut float_ok = true;
    let mut time_ok = true;
    for tok in tokens {
        bool_ok = bool_ok && parse_bool_token(tok).is_some();
        int_ok = int_ok && parse_int_token(tok).is_some();
        float_ok = float_ok && parse_float_token(tok).is_some();
        time_ok = time_ok && parse_timestamp_token(tok).is_some();
        if !(bool_ok || int_ok || float_ok || time_ok) {
            break;
        }
    }
    if bool_ok {
        SemanticType::Boolean
    } else if int_ok {
        SemanticType::Integer
    } else if float_ok {
        SemanticType::Float
    } else if time_ok {
        SemanticType::Temporal
    } else {
        SemanticType::Categorical
    }
}

/// Infers a type for the raw tokens and converts them.
pub fn column_from_tokens(raw: Vec<Option<String>>) -> ColumnData {
    let stype = infer_semantic_type(&raw);
    // Inference guarantees every parse below succeeds.
    match stype {
        SemanticType::Boolean => ColumnData::Boolean(
            raw.iter()
                .map(|t| t.as_deref().and_then(parse_bool_token))
                .collect(),
        ),
        SemanticType::Integer => ColumnData::Integer(
            raw.iter()
                .map(|t| t.as_deref().and_then(parse_int_token))
                .collect(),
        ),
        SemanticType::Float => ColumnData::Float(
            raw.iter()
                .map(|t| t.as_deref().and_then(parse_float_token))
                .collect(),
        ),
        SemanticType::Temporal => ColumnData::Temporal(
            raw.iter()
                .map(|t| t.as_deref().and_then(parse_timestamp_token))
                .collect(),
        ),
        SemanticType::Categorical => ColumnData::Categorical(raw),
    }
}
