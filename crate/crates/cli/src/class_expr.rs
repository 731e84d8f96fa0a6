//! Class arguments: either coordinates (`1 0 -1/2`, `1,0,-1/2`) or a linear
//! expression over basis labels (`w0 - 8*C1 - 21*D123`, `1/2*h + e1`).
//! `K` names the canonical class unless the lattice has a basis label `K`.

use num_traits::{One, Signed, Zero};
use symcone::rational::{format_rational, parse_rational};
use symcone::{ClassVector, Error, IntersectionLattice, Rational, Result};

pub fn parse_class(l: &IntersectionLattice, args: &[String]) -> Result<ClassVector> {
    let joined = args.join(" ");
    if joined.chars().any(|c| c.is_ascii_alphabetic()) {
        return parse_expression(l, &joined);
    }
    let coords: Vec<Rational> = joined
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect::<Result<_>>()?;
    if coords.len() != l.rank() {
        return Err(Error::Malformed(format!(
            "class has {} coordinates but the lattice has rank {}",
            coords.len(),
            l.rank()
        )));
    }
    Ok(ClassVector::new(coords))
}

fn parse_expression(l: &IntersectionLattice, text: &str) -> Result<ClassVector> {
    let bad = |msg: String| Error::Malformed(format!("class expression `{text}`: {msg}"));
    // longest label first so `s+3` wins over `s`
    let mut labels: Vec<&str> = l.labels().iter().map(String::as_str).collect();
    labels.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let canonical_alias = l.label_index("K").is_none() && l.canonical_class().is_some();

    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let mut out = ClassVector::zeros(l.rank());
    if s.is_empty() {
        return Err(bad("empty".into()));
    }
    while pos < s.len() {
        let mut sign = Rational::one();
        let mut saw_sign = false;
        while pos < s.len() && (s[pos] == '+' || s[pos] == '-') {
            if s[pos] == '-' {
                sign = -sign;
            }
            saw_sign = true;
            pos += 1;
        }
        if pos > 0 && !saw_sign {
            return Err(bad(format!("expected + or - at offset {pos}")));
        }
        let start = pos;
        while pos < s.len() && (s[pos].is_ascii_digit() || s[pos] == '/') {
            pos += 1;
        }
        let coef = if pos > start {
            let num: String = s[start..pos].iter().collect();
            let c = parse_rational(&num).map_err(|e| bad(e.to_string()))?;
            if pos < s.len() && s[pos] == '*' {
                pos += 1;
            }
            c
        } else {
            Rational::one()
        };
        let rest: String = s[pos..].iter().collect();
        let label = labels
            .iter()
            .find(|lab| rest.starts_with(**lab))
            .map(|lab| lab.to_string())
            .or_else(|| (canonical_alias && rest.starts_with('K')).then(|| "K".to_string()))
            .ok_or_else(|| bad(format!("unknown label at `{rest}`")))?;
        pos += label.chars().count();
        let term = if label == "K" && canonical_alias {
            l.canonical_class().expect("checked").clone()
        } else {
            l.basis_vector(&label).expect("matched a label")
        };
        out = out.plus_scaled(&(sign * coef), &term);
    }
    Ok(out)
}

/// Render a class as an expression the parser accepts.
pub fn format_class(l: &IntersectionLattice, v: &ClassVector) -> String {
    let mut out = String::new();
    for (c, label) in v.coords().iter().zip(l.labels()) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push('*');
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcone::models::{build_kk_model, build_ruled_model, Parity};
    use symcone::rational::{int, ratio};

    fn args(s: &str) -> Vec<String> {
        vec![s.to_string()]
    }

    #[test]
    fn expressions_and_coordinates() {
        let m = build_kk_model(true).unwrap();
        let l = m.lattice();
        let v = parse_class(l, &args("w0-8*C1 - 21*D123")).unwrap();
        assert_eq!(v.coords()[21], int(1));
        assert_eq!(v.coords()[0], int(-8));
        assert_eq!(format_class(l, &v), "-8*C1 - 21*D123 + w0");
        assert_eq!(parse_class(l, &args(&format_class(l, &v))).unwrap(), v);
        let k = parse_class(l, &args("w0 + 3K")).unwrap();
        assert_eq!(k.coords()[0], int(7));
        let h = parse_class(l, &args("1/2C1")).unwrap();
        assert_eq!(h.coords()[0], ratio(1, 2));
    }

    #[test]
    fn signed_labels_match_longest_first() {
        let m = build_ruled_model(0, 3, Parity::Nontrivial).unwrap();
        let l = m.lattice();
        let v = parse_class(l, &args("2*s+3 - s-3")).unwrap();
        assert_eq!(v, ClassVector::from_ints(&[2, -1]));
        let c = parse_class(l, &["2".into(), "-1".into()]).unwrap();
        assert_eq!(c, v);
        assert_eq!(parse_class(l, &args("2,-1")).unwrap(), v);
    }

    #[test]
    fn rejects_garbage() {
        let m = build_ruled_model(0, 3, Parity::Nontrivial).unwrap();
        let l = m.lattice();
        assert!(parse_class(l, &args("2*x")).is_err());
        assert!(parse_class(l, &args("1.5,0")).is_err());
        assert!(parse_class(l, &args("1")).is_err());
    }
}
