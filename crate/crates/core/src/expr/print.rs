use num_traits::{One, Zero};

use super::Expr;
use crate::numerics::QuadExt;

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

/// Renders an expression so that `parse(print(e)) == e` structurally.
pub fn print(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(e, &mut s);
    s
}

fn const_text(c: &QuadExt) -> (String, u8) {
    if let Some(r) = c.as_rational() {
        let text = r.to_string();
        let prec = if r.is_negative() {
            NEG
        } else if r.is_integer() {
            ATOM
        } else {
            MUL
        };
        return (text, prec);
    }
    if c.a().is_zero() {
        let prec = if c.b().is_negative() {
            NEG
        } else if c.b().is_one() {
            POW
        } else {
            MUL
        };
        return (c.to_string(), prec);
    }
    (format!("({c})"), ATOM)
}

fn is_pure_surd(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if !c.is_rational() && c.a().is_zero())
}

fn is_rational_const(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.is_rational())
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) => const_text(c).1,
        Expr::Var => ATOM,
        Expr::Add(..) | Expr::Sub(..) => ADD,
        Expr::Mul(..) | Expr::Div(..) => MUL,
        Expr::Neg(_) => NEG,
        Expr::Pow(..) => POW,
    }
}

fn write_at(e: &Expr, min: u8, out: &mut String) {
    if prec(e) < min {
        out.push('(');
        write_expr(e, out);
        out.push(')');
    } else {
        write_expr(e, out);
    }
}

fn write_paren(e: &Expr, out: &mut String) {
    out.push('(');
    write_expr(e, out);
    out.push(')');
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Const(c) => out.push_str(&const_text(c).0),
        Expr::Var => out.push('x'),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            // `1 + sqrt(2)` inside parentheses would read back as one constant
            if is_rational_const(a) && is_pure_surd(b) {
                write_paren(a, out);
            } else {
                write_at(a, ADD, out);
            }
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_at(b, MUL, out);
        }
        Expr::Mul(a, b) => {
            write_at(a, MUL, out);
            out.push('*');
            if is_rational_const(a) && is_pure_surd(b) {
                write_paren(b, out);
            } else {
                write_at(b, POW, out);
            }
        }
        Expr::Div(a, b) => {
            write_at(a, MUL, out);
            out.push_str(" / ");
            write_at(b, POW, out);
        }
        Expr::Neg(a) => {
            out.push('-');
            match a.as_ref() {
                Expr::Const(c) if const_text(c).1 == ATOM && !c.is_rational() => write_expr(a, out),
                Expr::Const(_) => write_paren(a, out),
                _ => write_at(a, NEG, out),
            }
        }
        Expr::Pow(a, r) => {
            write_at(a, ATOM, out);
            out.push('^');
            if r.is_integer() && !r.is_negative() {
                out.push_str(&r.to_string());
            } else {
                out.push('(');
                out.push_str(&r.to_string());
                out.push(')');
            }
        }
    }
}
