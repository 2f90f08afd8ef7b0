use serde_json::{json, Value};

use super::sweep::Figure2Row;

pub const SCHEMA_VERSION: u32 = 1;
pub const FIGURE2_HEADER: &str = "theory,p,eps,m,C_lower,C_upper,C_exact,V,D";

/// Shortest form with 12 significant digits, like C's `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if (-4..12).contains(&exp) {
        let s = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let (int, frac) = digits.split_at(exp as usize + 1);
            format!("{int}.{frac}")
        };
        trim_fraction(&s)
    } else {
        let m = trim_fraction(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A float rounded to 12 significant digits as a JSON value; `"inf"` for
/// infinities, `null` for NaN.
pub fn json_num(x: f64) -> Value {
    if x.is_nan() {
        Value::Null
    } else if x.is_infinite() {
        Value::String(fmt_sig(x))
    } else {
        let rounded: f64 = fmt_sig(x).parse().expect("formatted float parses");
        json!(rounded)
    }
}

pub fn figure2_csv(rows: &[Figure2Row]) -> String {
    let mut out = String::from(FIGURE2_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [
            r.theory.name().to_string(),
            fmt_sig(r.p),
            fmt_sig(r.eps),
            r.m.to_string(),
            fmt_sig(r.c_lower),
            fmt_sig(r.c_upper),
            r.c_exact.map(fmt_sig).unwrap_or_default(),
            fmt_sig(r.v),
            r.d.map_or_else(|| "nan".to_string(), |d| d.to_string()),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn figure2_row_json(r: &Figure2Row) -> Value {
    json!({
        "theory": r.theory.name(),
        "p": json_num(r.p),
        "eps": json_num(r.eps),
        "m": r.m,
        "C_lower": json_num(r.c_lower),
        "C_upper": json_num(r.c_upper),
        "C_exact": r.c_exact.map_or(Value::Null, json_num),
        "V": json_num(r.v),
        "D": r.d,
        "error": r.error,
    })
}

pub fn figure2_json(rows: &[Figure2Row]) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "figure2",
        "rows": rows.iter().map(figure2_row_json).collect::<Vec<_>>(),
    });
    pretty(&doc)
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.02), "0.02");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_sig(74.5), "74.5");
        assert_eq!(fmt_sig(4.9 / 3.1), "1.58064516129");
        assert_eq!(fmt_sig(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_sig(1.5e-5), "1.5e-05");
        assert_eq!(fmt_sig(1.5e-4), "0.00015");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(999999999999.5), "1e+12");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn json_numbers_round_like_csv() {
        assert_eq!(json_num(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(json_num(f64::INFINITY), json!("inf"));
        assert_eq!(json_num(f64::NAN), Value::Null);
    }
}
