//! Canonical printer. Output always reparses to the same tree.

use super::{variable_name, Expr, Literal};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const PREFIX: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => PREFIX,
        Expr::Pow(..) => POWER,
        Expr::Lit(_) | Expr::Var(_) | Expr::Call(..) => ATOM,
    }
}

pub(crate) fn print(e: &Expr, dim: usize) -> String {
    let mut out = String::new();
    write(e, dim, 0, &mut out);
    out
}

fn write(e: &Expr, dim: usize, min: u8, out: &mut String) {
    let paren = precedence(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Lit(Literal::Rational(r)) => out.push_str(&r.to_string()),
        // Debug formatting always carries `.` or `e`, so floats stay floats.
        Expr::Lit(Literal::Float(v)) => out.push_str(&format!("{v:?}")),
        Expr::Var(i) => out.push_str(&variable_name(*i, dim)),
        Expr::Neg(a) => {
            out.push('-');
            write(a, dim, PREFIX, out);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write(a, dim, SUM, out);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write(b, dim, PRODUCT, out);
        }
        Expr::Mul(a, b) => {
            write(a, dim, PRODUCT, out);
            out.push('*');
            write(b, dim, PREFIX, out);
        }
        Expr::Div(a, b) => {
            // spaced so that `2 / 3` never lexes as the literal `2/3`
            write(a, dim, PRODUCT, out);
            out.push_str(" / ");
            write(b, dim, PREFIX, out);
        }
        Expr::Pow(a, p) => {
            write(a, dim, ATOM, out);
            out.push_str("**");
            out.push_str(&p.to_string());
        }
        Expr::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, dim, 0, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_scalar;

    fn roundtrip(s: &str, dim: usize) -> String {
        let f = parse_scalar(s, dim).unwrap();
        let printed = f.to_string();
        let again = parse_scalar(&printed, dim).unwrap();
        assert_eq!(f, again, "`{s}` printed as `{printed}`");
        printed
    }

    #[test]
    fn printing_is_canonical_and_reparses() {
        assert_eq!(roundtrip("x**2*y + sin(z)", 3), "x**2*y + sin(z)");
        assert_eq!(roundtrip("x - (y - z)", 3), "x - (y - z)");
        assert_eq!(roundtrip("(x - y) - z", 3), "x - y - z");
        assert_eq!(roundtrip("x + (y + z)", 3), "x + (y + z)");
        assert_eq!(roundtrip("x / (y*z)", 3), "x / (y*z)");
        assert_eq!(roundtrip("-(x + y)", 3), "-(x + y)");
        assert_eq!(roundtrip("(-x)**2", 3), "(-x)**2");
        assert_eq!(roundtrip("-x**2", 3), "-x**2");
        assert_eq!(roundtrip("(x**2)**3", 3), "(x**2)**3");
        assert_eq!(roundtrip("2/3*x1 + 2 / 3", 4), "2/3*x1 + 2 / 3");
        assert_eq!(roundtrip("x*-y", 3), "x*-y");
        assert_eq!(roundtrip("0.5*exp(x) + 1e-5", 1), "0.5*exp(x) + 1e-5");
        assert_eq!(roundtrip("2/3**2", 1), "2/3**2");
        assert_eq!(roundtrip("2 / 3**2", 1), "2 / 3**2");
    }
}
