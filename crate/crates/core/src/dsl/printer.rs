//! Canonical fully-parenthesized printing. `parse(print(e))` is
//! structurally equal to `e` for every parser-producible tree.

use super::ast::PotentialExpr;

pub fn print(expr: &PotentialExpr) -> String {
    let mut out = String::new();
    write_expr(expr, &mut out);
    out
}

fn write_expr(expr: &PotentialExpr, out: &mut String) {
    match expr {
        PotentialExpr::Number(x) => {
            out.push_str(&format!("{x}"));
        }
        PotentialExpr::ImaginaryUnit => out.push('i'),
        PotentialExpr::Var(v) => out.push_str(v.name()),
        PotentialExpr::Param(name) => out.push_str(name),
        PotentialExpr::Neg(a) => {
            out.push_str("(-");
            write_expr(a, out);
            out.push(')');
        }
        PotentialExpr::Add(a, b) => write_binary(a, " + ", b, out),
        PotentialExpr::Sub(a, b) => write_binary(a, " - ", b, out),
        PotentialExpr::Mul(a, b) => write_binary(a, " * ", b, out),
        PotentialExpr::Div(a, b) => write_binary(a, " / ", b, out),
        PotentialExpr::Pow(a, r) => {
            out.push('(');
            write_expr(a, out);
            out.push_str(")^(");
            out.push_str(&r.num.to_string());
            if r.den != 1 {
                out.push('/');
                out.push_str(&r.den.to_string());
            }
            out.push(')');
        }
        PotentialExpr::Exp(a) => write_call("exp", a, out),
        PotentialExpr::Ln(a) => write_call("ln", a, out),
        PotentialExpr::Conj(a) => write_call("conj", a, out),
    }
}

fn write_binary(a: &PotentialExpr, op: &str, b: &PotentialExpr, out: &mut String) {
    out.push('(');
    write_expr(a, out);
    out.push_str(op);
    write_expr(b, out);
    out.push(')');
}

fn write_call(name: &str, arg: &PotentialExpr, out: &mut String) {
    out.push_str(name);
    out.push('(');
    write_expr(arg, out);
    out.push(')');
}
