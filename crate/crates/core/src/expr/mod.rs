//! Arithmetic expressions in one variable `u`, used to define profile
//! functions in configuration files.
//!
//! The grammar is documented in `docs/grammar.md`. Parsing is a hand-written
//! recursive descent; every node remembers the byte offset it came from so
//! evaluation errors can point back into the source.

mod parse;

use std::fmt;

use thiserror::Error;

pub use parse::parse;

/// Byte offset into the source string.
pub type Pos = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Arccot,
    Arctan,
    Arcsinh,
    Arctanh,
    Abs,
}

impl Func {
    pub const ALL: [Func; 15] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sech,
        Func::Arccot,
        Func::Arctan,
        Func::Arcsinh,
        Func::Arctanh,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sech => "sech",
            Func::Arccot => "arccot",
            Func::Arctan => "arctan",
            Func::Arcsinh => "arcsinh",
            Func::Arctanh => "arctanh",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64, pos: Pos) -> Result<f64, ExprError> {
        let domain = |what: &'static str| ExprError::Eval {
            kind: EvalErrorKind::Domain(what),
            pos,
        };
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => {
                if x <= 0.0 {
                    return Err(domain("ln of a non-positive number"));
                }
                x.ln()
            }
            Func::Sqrt => {
                if x < 0.0 {
                    return Err(domain("sqrt of a negative number"));
                }
                x.sqrt()
            }
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Sech => 1.0 / x.cosh(),
            // continuous branch with values in (0, pi)
            Func::Arccot => std::f64::consts::FRAC_PI_2 - x.atan(),
            Func::Arctan => x.atan(),
            Func::Arcsinh => x.asinh(),
            Func::Arctanh => {
                if x.abs() >= 1.0 {
                    return Err(domain("arctanh outside (-1, 1)"));
                }
                x.atanh()
            }
            Func::Abs => x.abs(),
        };
        Ok(y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Pi,
    E,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// An AST node together with the byte offset where it starts.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub node: Node,
    pub pos: Pos,
}

impl Expr {
    pub fn new(node: Node, pos: Pos) -> Self {
        Expr { node, pos }
    }

    pub fn eval(&self, u: f64) -> Result<f64, ExprError> {
        let value = match &self.node {
            Node::Num(x) => *x,
            Node::Var => u,
            Node::Pi => std::f64::consts::PI,
            Node::E => std::f64::consts::E,
            Node::Neg(a) => -a.eval(u)?,
            Node::Bin(op, a, b) => {
                let x = a.eval(u)?;
                let y = b.eval(u)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(ExprError::Eval {
                                kind: EvalErrorKind::DivByZero,
                                pos: self.pos,
                            });
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        if x == 0.0 && y < 0.0 {
                            return Err(ExprError::Eval {
                                kind: EvalErrorKind::DivByZero,
                                pos: self.pos,
                            });
                        }
                        x.powf(y)
                    }
                }
            }
            Node::Call(f, a) => f.apply(a.eval(u)?, self.pos)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ExprError::Eval {
                kind: EvalErrorKind::NonFinite,
                pos: self.pos,
            })
        }
    }

    /// True when the tree never references `u`.
    pub fn is_constant(&self) -> bool {
        match &self.node {
            Node::Var => false,
            Node::Num(_) | Node::Pi | Node::E => true,
            Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
            Node::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }
}

/// Canonical, fully parenthesised form. Re-parsing it yields an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Num(x) => write!(f, "{x}"),
            Node::Var => f.write_str("u"),
            Node::Pi => f.write_str("pi"),
            Node::E => f.write_str("e"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Bin(op, a, b) => write!(f, "({a}{}{b})", op.symbol()),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivByZero,
    Domain(&'static str),
    NonFinite,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalErrorKind::DivByZero => f.write_str("division by zero"),
            EvalErrorKind::Domain(what) => f.write_str(what),
            EvalErrorKind::NonFinite => f.write_str("non-finite result"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: expected {}", expected.join(" or "))]
    Syntax { pos: Pos, expected: Vec<String> },

    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: Pos },

    #[error("evaluation error at byte {pos}: {kind}")]
    Eval { kind: EvalErrorKind, pos: Pos },
}

impl ExprError {
    pub fn is_syntax(&self) -> bool {
        !matches!(self, ExprError::Eval { .. })
    }
}

/// A parsed profile function together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileExpr {
    source: String,
    ast: Expr,
}

impl ProfileExpr {
    pub fn parse(src: &str) -> Result<Self, ExprError> {
        Ok(ProfileExpr {
            source: src.to_string(),
            ast: parse(src)?,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn eval(&self, u: f64) -> Result<f64, ExprError> {
        self.ast.eval(u)
    }

    /// Central difference `(f(u+h) - f(u-h)) / 2h`; `h` defaults to `1e-6 max(1, |u|)`.
    pub fn derivative(&self, u: f64, h: Option<f64>) -> Result<f64, ExprError> {
        let h = h.unwrap_or(1e-6 * u.abs().max(1.0));
        Ok((self.eval(u + h)? - self.eval(u - h)?) / (2.0 * h))
    }

    /// Canonical printed form of the tree.
    pub fn canonical(&self) -> String {
        self.ast.to_string()
    }
}

impl fmt::Display for ProfileExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Evaluates a constant expression such as `pi/6` or `0.25`.
pub fn eval_constant(src: &str) -> Result<f64, ExprError> {
    let ast = parse(src)?;
    if !ast.is_constant() {
        return Err(ExprError::Syntax {
            pos: 0,
            expected: vec!["a constant expression (no `u`)".into()],
        });
    }
    ast.eval(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ev(src: &str, u: f64) -> f64 {
        ProfileExpr::parse(src).unwrap().eval(u).unwrap()
    }

    #[test]
    fn basic_values() {
        assert_eq!(ev("sin(u)", FRAC_PI_2), 1.0);
        assert_eq!(ev("e^(-u)", 0.0), 1.0);
        assert_eq!(ev("u^2+1", 3.0), 10.0);
        assert!((ev("sqrt(u^2+1)", 1.0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn funnel_profile_at_zero() {
        // arccot(1) = pi/4
        assert!((ev("2*arccot(e^(-u))", 0.0) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("2+3*4^2", 0.0), 50.0);
        assert_eq!(ev("-u^2", 3.0), -9.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("10-4-3", 0.0), 3.0);
        assert_eq!(ev("12/3/2", 0.0), 2.0);
        assert_eq!(ev("-2*-3", 0.0), 6.0);
    }

    #[test]
    fn division_by_zero_is_reported_with_position() {
        let err = ProfileExpr::parse("1/u").unwrap().eval(0.0).unwrap_err();
        assert_eq!(
            err,
            ExprError::Eval {
                kind: EvalErrorKind::DivByZero,
                pos: 1
            }
        );
        let err = ProfileExpr::parse("1 + ln(u)").unwrap().eval(-1.0).unwrap_err();
        assert!(matches!(
            err,
            ExprError::Eval {
                kind: EvalErrorKind::Domain(_),
                pos: 4
            }
        ));
    }

    #[test]
    fn derivatives() {
        let d = |src: &str, u: f64| ProfileExpr::parse(src).unwrap().derivative(u, None).unwrap();
        assert!((d("sin(u)", 0.0) - 1.0).abs() < 1e-9);
        assert!((d("u^3", 2.0) - 12.0).abs() < 1e-6);
        assert!((d("e^(-u)", 0.0) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_propagates_eval_errors() {
        let e = ProfileExpr::parse("ln(u)").unwrap();
        assert!(e.derivative(0.0, Some(1e-3)).is_err());
    }

    #[test]
    fn constants() {
        assert!((eval_constant("pi/6").unwrap() - PI / 6.0).abs() < 1e-16);
        assert_eq!(eval_constant("0.25").unwrap(), 0.25);
        assert!(eval_constant("u+1").is_err());
    }

    #[test]
    fn canonical_form_reparses() {
        let e = ProfileExpr::parse("-u^2 + 3*sin(u)/2 - 1e-3").unwrap();
        let printed = e.canonical();
        let again = ProfileExpr::parse(&printed).unwrap();
        assert_eq!(again.canonical(), printed);
        for u in [-1.0, 0.3, 2.0] {
            assert_eq!(e.eval(u).unwrap(), again.eval(u).unwrap());
        }
    }
}
