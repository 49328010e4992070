use super::Span;

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Histogram,
    TopK,
    Timeline,
}

impl PlotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlotKind::Histogram => "histogram",
            PlotKind::TopK => "topk",
            PlotKind::Timeline => "timeline",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "histogram" => Some(PlotKind::Histogram),
            "topk" => Some(PlotKind::TopK),
            "timeline" => Some(PlotKind::Timeline),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Load {
        path: String,
        name: Ident,
    },
    Assign {
        name: Ident,
        expr: TableExpr,
    },
    /// A bare table expression whose value becomes the temporary output.
    Expr(TableExpr),
    Plot {
        table: Ident,
        column: Ident,
        kind: PlotKind,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableExpr {
    Name(Ident),
    Filter {
        input: Box<TableExpr>,
        predicate: Expr,
    },
    Select {
        input: Box<TableExpr>,
        columns: Vec<Ident>,
    },
    Drop {
        input: Box<TableExpr>,
        columns: Vec<Ident>,
    },
    Mutate {
        input: Box<TableExpr>,
        column: Ident,
        value: Expr,
    },
    DropNa {
        input: Box<TableExpr>,
        columns: Option<Vec<Ident>>,
    },
    Dedupe {
        input: Box<TableExpr>,
        by: Option<Vec<Ident>>,
    },
    Sort {
        input: Box<TableExpr>,
        by: Ident,
        descending: bool,
    },
    Head {
        input: Box<TableExpr>,
        n: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::And => "and",
            BinaryOp::Or => "or",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge
        )
    }
}

/// Row-level expression, used both as `where` predicate and `set` value.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Column(Ident),
    /// `table.column`, only meaningful as an aggregate argument.
    Qualified {
        table: Ident,
        column: Ident,
    },
    Literal(Literal, Span),
    Unary {
        op: UnaryOp,
        expr: Box<Expr>,
        span: Span,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        span: Span,
    },
    Call {
        func: Ident,
        args: Vec<Expr>,
        span: Span,
    },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Column(id) => id.span,
            Expr::Qualified { table, column } => table.span.to(column.span),
            Expr::Literal(_, span)
            | Expr::Unary { span, .. }
            | Expr::Binary { span, .. }
            | Expr::Call { span, .. } => *span,
        }
    }
}
