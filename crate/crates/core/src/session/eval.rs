//! Evaluation of table expressions and row expressions.
//!
//! Row expressions are type-checked and compiled against the input table
//! first, so type and name errors surface before any row is touched.
//! Aggregates over named tables are folded into constants at compile time.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::csv::format_float;
use crate::dsl::{BinaryOp, Expr, Ident, Literal, Span, TableExpr, UnaryOp};
use crate::infer::{format_timestamp, parse_float_token, parse_int_token, parse_timestamp_token};
use crate::profile::numeric_cells;
use crate::profile::stats::{mean_std, quantile, quartiles, sorted_copy};
use crate::table::{Cell, Column, ColumnData, SemanticType, Table};

use super::error::{ErrorKind, ExecError};

/// Resolves a table name in the session environment.
pub type Env<'a> = &'a dyn Fn(&str) -> Option<Arc<Table>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Bool,
    Int,
    Float,
    Str,
    Time,
}

impl Ty {
    fn of(stype: SemanticType) -> Ty {
        match stype {
            SemanticType::Boolean => Ty::Bool,
            SemanticType::Integer => Ty::Int,
            SemanticType::Float => Ty::Float,
            SemanticType::Temporal => Ty::Time,
            SemanticType::Categorical => Ty::Str,
        }
    }

    fn stype(self) -> SemanticType {
        match self {
            Ty::Bool => SemanticType::Boolean,
            Ty::Int => SemanticType::Integer,
            Ty::Float => SemanticType::Float,
            Ty::Time => SemanticType::Temporal,
            Ty::Str => SemanticType::Categorical,
        }
    }

    fn is_numeric(self) -> bool {
        matches!(self, Ty::Int | Ty::Float)
    }

    fn name(self) -> &'static str {
        match self {
            Ty::Bool => "boolean",
            Ty::Int => "integer",
            Ty::Float => "float",
            Ty::Str => "string",
            Ty::Time => "timestamp",
        }
    }
}

/// Target of a cast function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CastTarget {
    Int,
    Float,
    Date,
}

impl CastTarget {
    fn ty(self) -> Ty {
        match self {
            CastTarget::Int => Ty::Int,
            CastTarget::Float => Ty::Float,
            CastTarget::Date => Ty::Time,
        }
    }

    fn accepts(self, from: Ty) -> bool {
        match self {
            CastTarget::Int | CastTarget::Float => {
                matches!(from, Ty::Int | Ty::Float | Ty::Bool | Ty::Str)
            }
            CastTarget::Date => matches!(from, Ty::Str | Ty::Time),
        }
    }

    fn fn_name(self, strict: bool) -> &'static str {
        match (self, strict) {
            (CastTarget::Int, true) => "int",
            (CastTarget::Float, true) => "float",
            (CastTarget::Date, true) => "date",
            (CastTarget::Int, false) => "try_int",
            (CastTarget::Float, false) => "try_float",
            (CastTarget::Date, false) => "try_date",
        }
    }
}

/// Converts one cell. Null stays null; `None` means the value cannot be
/// represented in the target type.
pub fn cast_cell(cell: &Cell, target: CastTarget) -> Option<Cell> {
    Some(match (target, cell) {
        (_, Cell::Null) => Cell::Null,
        (CastTarget::Int, Cell::Int(x)) => Cell::Int(*x),
        (CastTarget::Int, Cell::Float(x)) => {
            if x.fract() != 0.0 || *x < -9.223_372_036_854_776e18 || *x >= 9.223_372_036_854_776e18 {
                return None;
            }
            Cell::Int(*x as i64)
        }
        (CastTarget::Int, Cell::Bool(b)) => Cell::Int(i64::from(*b)),
        (CastTarget::Int, Cell::Str(s)) => Cell::Int(parse_int_token(s)?),
        (CastTarget::Float, Cell::Int(x)) => Cell::Float(*x as f64),
        (CastTarget::Float, Cell::Float(x)) => Cell::Float(*x),
        (CastTarget::Float, Cell::Bool(b)) => Cell::Float(f64::from(u8::from(*b))),
        (CastTarget::Float, Cell::Str(s)) => Cell::Float(parse_float_token(s)?),
        (CastTarget::Date, Cell::Time(t)) => Cell::Time(*t),
        (CastTarget::Date, Cell::Str(s)) => Cell::Time(parse_timestamp_token(s)?),
        _ => return None,
    })
}

/// Casts a whole column. Strict casts fail on the first unparsable non-null
/// cell; coercing casts turn such cells into nulls.
pub fn cast_column(
    table: &Table,
    column: &str,
    target: CastTarget,
    strict: bool,
) -> Result<Table, ExecError> {
    let idx = table.column_index(column).ok_or_else(|| {
        ExecError::new(
            ErrorKind::NameError,
            format!("unknown column `{column}`"),
            None,
        )
    })?;
    let data = table.columns()[idx].data();
    if !target.accepts(Ty::of(data.stype())) {
        return Err(ExecError::new(
            ErrorKind::TypeError,
            format!(
                "{}() does not accept a {} column",
                target.fn_name(strict),
                Ty::of(data.stype()).name()
            ),
            None,
        ));
    }
    let mut cells = Vec::with_capacity(table.nrows());
    for row in 0..table.nrows() {
        let cell = data.cell(row);
        cells.push(match cast_cell(&cell, target) {
            Some(c) => c,
            None if strict => return Err(cast_error(&cell, target, row, None)),
            None => Cell::Null,
        });
    }
    let new = ColumnData::from_cells(target.ty().stype(), cells).expect("cast output conforms");
    replace_column(table, Column::new(column, new))
}

fn cast_error(cell: &Cell, target: CastTarget, row: usize, span: Option<Span>) -> ExecError {
    ExecError::new(
        ErrorKind::CastError,
        format!(
            "cannot convert {} to {} at row {row}",
            render_cell(cell),
            target.ty().name()
        ),
        span,
    )
}

fn render_cell(cell: &Cell) -> String {
    match cell {
        Cell::Null => "null".into(),
        Cell::Bool(b) => b.to_string(),
        Cell::Int(x) => x.to_string(),
        Cell::Float(x) => format_float(*x),
        Cell::Str(s) => format!("{s:?}"),
        Cell::Time(t) => format_timestamp(*t),
    }
}

fn to_string_cell(cell: Cell) -> Cell {
    match cell {
        Cell::Null => Cell::Null,
        Cell::Str(s) => Cell::Str(s),
        Cell::Bool(b) => Cell::Str(b.to_string()),
        Cell::Int(x) => Cell::Str(x.to_string()),
        Cell::Float(x) => Cell::Str(format_float(x)),
        Cell::Time(t) => Cell::Str(format_timestamp(t)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StrFn {
    Upper,
    Lower,
    Len,
    ToStr,
}

#[derive(Debug)]
enum Node {
    Col(usize),
    Const(Cell),
    Neg(Box<Node>),
    Not(Box<Node>),
    Arith(BinaryOp, Box<Node>, Box<Node>),
    Cmp(BinaryOp, Box<Node>, Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    IsNull(Box<Node>),
    Flags(Vec<bool>),
    Cast {
        target: CastTarget,
        strict: bool,
        arg: Box<Node>,
        span: Span,
    },
    Str(StrFn, Box<Node>),
}

fn truth(cell: &Cell) -> Option<bool> {
    match cell {
        Cell::Bool(b) => Some(*b),
        _ => None,
    }
}

fn compare(a: &Cell, b: &Cell) -> Option<Ordering> {
    match (a, b) {
        (Cell::Int(x), Cell::Int(y)) => Some(x.cmp(y)),
        (Cell::Int(x), Cell::Float(y)) => (*x as f64).partial_cmp(y),
        (Cell::Float(x), Cell::Int(y)) => x.partial_cmp(&(*y as f64)),
        (Cell::Float(x), Cell::Float(y)) => x.partial_cmp(y),
        (Cell::Str(x), Cell::Str(y)) => Some(x.cmp(y)),
        (Cell::Bool(x), Cell::Bool(y)) => Some(x.cmp(y)),
        (Cell::Time(x), Cell::Time(y)) => Some(x.cmp(y)),
        _ => None,
    }
}

fn as_f64(cell: &Cell) -> Option<f64> {
    match cell {
        Cell::Int(x) => Some(*x as f64),
        Cell::Float(x) => Some(*x),
        _ => None,
    }
}

fn finite(x: f64) -> Cell {
    if x.is_finite() {
        Cell::Float(x)
    } else {
        Cell::Null
    }
}

fn arith(op: BinaryOp, a: Cell, b: Cell) -> Cell {
    if let (Cell::Int(x), Cell::Int(y)) = (&a, &b) {
        let r = match op {
            BinaryOp::Add => x.checked_add(*y),
            BinaryOp::Sub => x.checked_sub(*y),
            BinaryOp::Mul => x.checked_mul(*y),
            BinaryOp::Div => {
                return if *y == 0 {
                    Cell::Null
                } else {
                    finite(*x as f64 / *y as f64)
                }
            }
            _ => unreachable!("not arithmetic"),
        };
        return r.map_or(Cell::Null, Cell::Int);
    }
    let (Some(x), Some(y)) = (as_f64(&a), as_f64(&b)) else {
        return Cell::Null;
    };
    match op {
        BinaryOp::Add => finite(x + y),
        BinaryOp::Sub => finite(x - y),
        BinaryOp::Mul => finite(x * y),
        BinaryOp::Div if y == 0.0 => Cell::Null,
        BinaryOp::Div => finite(x / y),
        _ => unreachable!("not arithmetic"),
    }
}

impl Node {
    fn eval(&self, table: &Table, row: usize) -> Result<Cell, ExecError> {
        Ok(match self {
            Node::Col(i) => table.columns()[*i].data().cell(row),
            Node::Const(c) => c.clone(),
            Node::Neg(e) => match e.eval(table, row)? {
                Cell::Int(x) => x.checked_neg().map_or(Cell::Null, Cell::Int),
                Cell::Float(x) => Cell::Float(-x),
                _ => Cell::Null,
            },
            Node::Not(e) => match truth(&e.eval(table, row)?) {
                Some(b) => Cell::Bool(!b),
                None => Cell::Null,
            },
            Node::Arith(op, a, b) => arith(*op, a.eval(table, row)?, b.eval(table, row)?),
            Node::Cmp(op, a, b) => {
                let ord = compare(&a.eval(table, row)?, &b.eval(table, row)?);
                Cell::Bool(ord.is_some_and(|o| match op {
                    BinaryOp::Eq => o == Ordering::Equal,
                    BinaryOp::Ne => o != Ordering::Equal,
                    BinaryOp::Lt => o == Ordering::Less,
                    BinaryOp::Le => o != Ordering::Greater,
                    BinaryOp::Gt => o == Ordering::Greater,
                    BinaryOp::Ge => o != Ordering::Less,
                    _ => unreachable!("not a comparison"),
                }))
            }
            Node::And(a, b) => {
                match (truth(&a.eval(table, row)?), truth(&b.eval(table, row)?)) {
                    (Some(false), _) | (_, Some(false)) => Cell::Bool(false),
                    (Some(true), Some(true)) => Cell::Bool(true),
                    _ => Cell::Null,
                }
            }
            Node::Or(a, b) => match (truth(&a.eval(table, row)?), truth(&b.eval(table, row)?)) {
                (Some(true), _) | (_, Some(true)) => Cell::Bool(true),
                (Some(false), Some(false)) => Cell::Bool(false),
                _ => Cell::Null,
            },
            Node::IsNull(e) => Cell::Bool(e.eval(table, row)?.is_null()),
            Node::Flags(flags) => Cell::Bool(flags[row]),
            Node::Cast {
                target,
                strict,
                arg,
                span,
            } => {
                let cell = arg.eval(table, row)?;
                match cast_cell(&cell, *target) {
                    Some(c) => c,
                    None if *strict => return Err(cast_error(&cell, *target, row, Some(*span))),
                    None => Cell::Null,
                }
            }
            Node::Str(f, e) => match (f, e.eval(table, row)?) {
                (_, Cell::Null) => Cell::Null,
                (StrFn::ToStr, c) => to_string_cell(c),
                (StrFn::Upper, Cell::Str(s)) => Cell::Str(s.to_uppercase()),
                (StrFn::Lower, Cell::Str(s)) => Cell::Str(s.to_lowercase()),
                (StrFn::Len, Cell::Str(s)) => Cell::Int(s.chars().count() as i64),
                _ => Cell::Null,
            },
        })
    }
}

/// Hashable view of one cell; nulls compare equal to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key<'a> {
    Null,
    Bool(bool),
    Int(i64),
    Float(u64),
    Str(&'a str),
}

fn key_at(data: &ColumnData, row: usize) -> Key<'_> {
    match data {
        ColumnData::Boolean(v) => v[row].map_or(Key::Null, Key::Bool),
        ColumnData::Integer(v) | ColumnData::Temporal(v) => v[row].map_or(Key::Null, Key::Int),
        ColumnData::Float(v) => v[row].map_or(Key::Null, |x| {
            Key::Float(if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() })
        }),
        ColumnData::Categorical(v) => v[row].as_deref().map_or(Key::Null, Key::Str),
    }
}

/// Marks every row whose non-null value occurs more than once in `data`.
pub fn duplicated_flags(data: &ColumnData) -> Vec<bool> {
    let n = data.len();
    let mut counts: HashMap<Key<'_>, usize> = HashMap::new();
    for row in 0..n {
        let k = key_at(data, row);
        if k != Key::Null {
            *counts.entry(k).or_default() += 1;
        }
    }
    (0..n)
        .map(|row| {
            let k = key_at(data, row);
            k != Key::Null && counts[&k] > 1
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum Aggregate {
    Mean,
    Std,
    Median,
    Min,
    Max,
    Iqr,
    Quantile,
}

impl Aggregate {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "mean" => Aggregate::Mean,
            "std" => Aggregate::Std,
            "median" => Aggregate::Median,
            "min" => Aggregate::Min,
            "max" => Aggregate::Max,
            "iqr" => Aggregate::Iqr,
            "quantile" => Aggregate::Quantile,
            _ => return None,
        })
    }

    /// Computed with the same routines the profiler uses, so templates built
    /// from these aggregates reproduce profile statistics exactly.
    fn compute(self, values: &[f64], p: f64) -> Option<f64> {
        let sorted = sorted_copy(values);
        match self {
            Aggregate::Mean => mean_std(values).map(|m| m.0),
            Aggregate::Std => mean_std(values).map(|m| m.1),
            Aggregate::Median => quantile(&sorted, 0.5).ok(),
            Aggregate::Min => sorted.first().copied(),
            Aggregate::Max => sorted.last().copied(),
            Aggregate::Iqr => quartiles(&sorted).map(|q| q.2),
            Aggregate::Quantile => quantile(&sorted, p).ok(),
        }
    }
}

struct Compiler<'a> {
    table: &'a Table,
    env: Env<'a>,
}

impl<'a> Compiler<'a> {
    fn column(&self, id: &Ident) -> Result<usize, ExecError> {
        self.table.column_index(&id.name).ok_or_else(|| {
            ExecError::name(
                format!("unknown column `{}` in table `{}`", id.name, self.table.name()),
                id.span,
            )
        })
    }

    fn compile(&self, expr: &Expr) -> Result<(Node, Ty), ExecError> {
        match expr {
            Expr::Column(id) => {
                let i = self.column(id)?;
                Ok((Node::Col(i), Ty::of(self.table.columns()[i].stype())))
            }
            Expr::Qualified { table, column } => Err(ExecError::type_error(
                format!(
                    "`{}.{}` is only allowed as an aggregate argument",
                    table.name, column.name
                ),
                expr.span(),
            )),
            Expr::Literal(lit, _) => Ok(match lit {
                Literal::Int(i) => (Node::Const(Cell::Int(*i)), Ty::Int),
                Literal::Float(f) => (Node::Const(Cell::Float(*f)), Ty::Float),
                Literal::Str(s) => (Node::Const(Cell::Str(s.clone())), Ty::Str),
                Literal::Bool(b) => (Node::Const(Cell::Bool(*b)), Ty::Bool),
            }),
            Expr::Unary { op, expr: inner, span } => {
                let (node, ty) = self.compile(inner)?;
                match op {
                    UnaryOp::Neg if ty.is_numeric() => Ok((Node::Neg(Box::new(node)), ty)),
                    UnaryOp::Not if ty == Ty::Bool => Ok((Node::Not(Box::new(node)), Ty::Bool)),
                    UnaryOp::Neg => Err(ExecError::type_error(
                        format!("cannot negate a {}", ty.name()),
                        *span,
                    )),
                    UnaryOp::Not => Err(ExecError::type_error(
                        format!("`not` expects a boolean, found {}", ty.name()),
                        *span,
                    )),
                }
            }
            Expr::Binary { op, lhs, rhs, span } => {
                let (l, lt) = self.compile(lhs)?;
                let (r, rt) = self.compile(rhs)?;
                let mismatch = || {
                    ExecError::type_error(
                        format!(
                            "`{}` cannot combine {} and {}",
                            op.symbol(),
                            lt.name(),
                            rt.name()
                        ),
                        *span,
                    )
                };
                let (l, r) = (Box::new(l), Box::new(r));
                match op {
                    BinaryOp::And | BinaryOp::Or => {
                        if lt != Ty::Bool || rt != Ty::Bool {
                            return Err(mismatch());
                        }
                        Ok((
                            if *op == BinaryOp::And {
                                Node::And(l, r)
                            } else {
                                Node::Or(l, r)
                            },
                            Ty::Bool,
                        ))
                    }
                    op if op.is_comparison() => {
                        if !(lt == rt || (lt.is_numeric() && rt.is_numeric())) {
                            return Err(mismatch());
                        }
                        Ok((Node::Cmp(*op, l, r), Ty::Bool))
                    }
                    _ => {
                        if !(lt.is_numeric() && rt.is_numeric()) {
                            return Err(mismatch());
                        }
                        let ty = if *op == BinaryOp::Div || lt == Ty::Float || rt == Ty::Float {
                            Ty::Float
                        } else {
                            Ty::Int
                        };
                        Ok((Node::Arith(*op, l, r), ty))
                    }
                }
            }
            Expr::Call { func, args, span } => self.call(func, args, *span),
        }
    }

    fn arity(&self, func: &Ident, args: &[Expr], n: usize, span: Span) -> Result<(), ExecError> {
        if args.len() != n {
            return Err(ExecError::type_error(
                format!(
                    "{}() takes {n} argument{}, got {}",
                    func.name,
                    if n == 1 { "" } else { "s" },
                    args.len()
                ),
                span,
            ));
        }
        Ok(())
    }

    fn call(&self, func: &Ident, args: &[Expr], span: Span) -> Result<(Node, Ty), ExecError> {
        let name = func.name.as_str();
        if let Some(agg) = Aggregate::from_name(name) {
            return self.aggregate(agg, func, args, span);
        }
        let cast = match name {
            "int" => Some((CastTarget::Int, true)),
            "float" => Some((CastTarget::Float, true)),
            "date" => Some((CastTarget::Date, true)),
            "try_int" => Some((CastTarget::Int, false)),
            "try_float" => Some((CastTarget::Float, false)),
            "try_date" => Some((CastTarget::Date, false)),
            _ => None,
        };
        if let Some((target, strict)) = cast {
            self.arity(func, args, 1, span)?;
            let (arg, ty) = self.compile(&args[0])?;
            if !target.accepts(ty) {
                return Err(ExecError::type_error(
                    format!("{name}() does not accept a {}", ty.name()),
                    span,
                ));
            }
            return Ok((
                Node::Cast {
                    target,
                    strict,
                    arg: Box::new(arg),
                    span,
                },
                target.ty(),
            ));
        }
        match name {
            "isnull" => {
                self.arity(func, args, 1, span)?;
                let (arg, _) = self.compile(&args[0])?;
                Ok((Node::IsNull(Box::new(arg)), Ty::Bool))
            }
            "duplicated" => {
                self.arity(func, args, 1, span)?;
                let Expr::Column(id) = &args[0] else {
                    return Err(ExecError::type_error(
                        "duplicated() expects a column name",
                        args[0].span(),
                    ));
                };
                let i = self.column(id)?;
                Ok((
                    Node::Flags(duplicated_flags(self.table.columns()[i].data())),
                    Ty::Bool,
                ))
            }
            "str" | "upper" | "lower" | "len" => {
                self.arity(func, args, 1, span)?;
                let (arg, ty) = self.compile(&args[0])?;
                let (f, out) = match name {
                    "str" => (StrFn::ToStr, Ty::Str),
                    "upper" => (StrFn::Upper, Ty::Str),
                    "lower" => (StrFn::Lower, Ty::Str),
                    _ => (StrFn::Len, Ty::Int),
                };
                if f != StrFn::ToStr && ty != Ty::Str {
                    return Err(ExecError::type_error(
                        format!("{name}() expects a string, found {}", ty.name()),
                        span,
                    ));
                }
                Ok((Node::Str(f, Box::new(arg)), out))
            }
            _ => Err(ExecError::name(format!("unknown function `{name}`"), func.span)),
        }
    }

    fn aggregate(
        &self,
        agg: Aggregate,
        func: &Ident,
        args: &[Expr],
        span: Span,
    ) -> Result<(Node, Ty), ExecError> {
        let expected = if matches!(agg, Aggregate::Quantile) { 2 } else { 1 };
        self.arity(func, args, expected, span)?;
        let named;
        let (source, column): (&Table, &Ident) = match &args[0] {
            Expr::Qualified { table, column } => {
                named = (self.env)(&table.name).ok_or_else(|| {
                    ExecError::name(format!("unknown table `{}`", table.name), table.span)
                })?;
                (&named, column)
            }
            Expr::Column(id) => (self.table, id),
            other => {
                return Err(ExecError::type_error(
                    format!("{}() expects a column reference", func.name),
                    other.span(),
                ))
            }
        };
        let col = source.column(&column.name).ok_or_else(|| {
            ExecError::name(
                format!("unknown column `{}` in table `{}`", column.name, source.name()),
                column.span,
            )
        })?;
        let values: Vec<f64> = match numeric_cells(col.data()) {
            Some(cells) => cells.into_iter().flatten().collect(),
            None => {
                return Err(ExecError::type_error(
                    format!("{}() expects a numeric column, `{}` is {}", func.name, column.name, col.stype()),
                    span,
                ))
            }
        };
        let p = if let Aggregate::Quantile = agg {
            let p = match &args[1] {
                Expr::Literal(Literal::Float(f), _) => *f,
                Expr::Literal(Literal::Int(i), _) => *i as f64,
                other => {
                    return Err(ExecError::type_error(
                        "quantile() expects a numeric literal probability",
                        other.span(),
                    ))
                }
            };
            if !(0.0..=1.0).contains(&p) {
                return Err(ExecError::type_error(
                    format!("quantile probability {p} is outside [0, 1]"),
                    args[1].span(),
                ));
            }
            p
        } else {
            0.0
        };
        let cell = agg.compute(&values, p).map_or(Cell::Null, Cell::Float);
        Ok((Node::Const(cell), Ty::Float))
    }
}

fn lookup(env: Env<'_>, id: &Ident) -> Result<Arc<Table>, ExecError> {
    env(&id.name).ok_or_else(|| ExecError::name(format!("unknown table `{}`", id.name), id.span))
}

fn column_indices(table: &Table, ids: &[Ident]) -> Result<Vec<usize>, ExecError> {
    let mut seen = HashSet::new();
    ids.iter()
        .map(|id| {
            let i = table.column_index(&id.name).ok_or_else(|| {
                ExecError::name(
                    format!("unknown column `{}` in table `{}`", id.name, table.name()),
                    id.span,
                )
            })?;
            if !seen.insert(i) {
                return Err(ExecError::name(
                    format!("column `{}` listed twice", id.name),
                    id.span,
                ));
            }
            Ok(i)
        })
        .collect()
}

fn replace_column(table: &Table, column: Column) -> Result<Table, ExecError> {
    let mut columns: Vec<Column> = table.columns().to_vec();
    match table.column_index(column.name()) {
        Some(i) => columns[i] = column,
        None => columns.push(column),
    }
    Table::with_rows(table.name(), columns, table.nrows())
        .map_err(|e| ExecError::new(ErrorKind::TypeError, e.to_string(), None))
}

fn sort_rows(data: &ColumnData, descending: bool) -> Vec<usize> {
    fn order<T>(v: &[Option<T>], descending: bool, cmp: impl Fn(&T, &T) -> Ordering) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        // Stable; nulls last in both directions.
        idx.sort_by(|&a, &b| match (&v[a], &v[b]) {
            (Some(x), Some(y)) => {
                let o = cmp(x, y);
                if descending {
                    o.reverse()
                } else {
                    o
                }
            }
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        });
        idx
    }
    match data {
        ColumnData::Boolean(v) => order(v, descending, Ord::cmp),
        ColumnData::Integer(v) | ColumnData::Temporal(v) => order(v, descending, Ord::cmp),
        ColumnData::Float(v) => order(v, descending, f64::total_cmp),
        ColumnData::Categorical(v) => order(v, descending, Ord::cmp),
    }
}

/// Evaluates a table expression. Inputs are never modified; every transform
/// returns a new table.
pub fn eval_table(expr: &TableExpr, env: Env<'_>) -> Result<Arc<Table>, ExecError> {
    Ok(match expr {
        TableExpr::Name(id) => lookup(env, id)?,
        TableExpr::Filter { input, predicate } => {
            let t = eval_table(input, env)?;
            let c = Compiler { table: &t, env };
            let (node, ty) = c.compile(predicate)?;
            if ty != Ty::Bool {
                return Err(ExecError::type_error(
                    format!("filter condition must be boolean, found {}", ty.name()),
                    predicate.span(),
                ));
            }
            let mut rows = Vec::new();
            for row in 0..t.nrows() {
                if node.eval(&t, row)? == Cell::Bool(true) {
                    rows.push(row);
                }
            }
            Arc::new(t.take_rows(&rows))
        }
        TableExpr::Select { input, columns } => {
            let t = eval_table(input, env)?;
            let idx = column_indices(&t, columns)?;
            let cols = idx.iter().map(|&i| t.columns()[i].clone()).collect();
            Arc::new(Table::with_rows(t.name(), cols, t.nrows()).expect("subset of a valid table"))
        }
        TableExpr::Drop { input, columns } => {
            let t = eval_table(input, env)?;
            let idx: HashSet<usize> = column_indices(&t, columns)?.into_iter().collect();
            let cols = t
                .columns()
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, c)| c.clone())
                .collect();
            Arc::new(Table::with_rows(t.name(), cols, t.nrows()).expect("subset of a valid table"))
        }
        TableExpr::Mutate {
            input,
            column,
            value,
        } => {
            let t = eval_table(input, env)?;
            let c = Compiler { table: &t, env };
            let (node, ty) = c.compile(value)?;
            let cells = (0..t.nrows())
                .map(|row| node.eval(&t, row))
                .collect::<Result<Vec<_>, _>>()?;
            let data = ColumnData::from_cells(ty.stype(), cells).expect("typed by compiler");
            Arc::new(replace_column(&t, Column::new(column.name.clone(), data))?)
        }
        TableExpr::DropNa { input, columns } => {
            let t = eval_table(input, env)?;
            let idx = match columns {
                Some(ids) => column_indices(&t, ids)?,
                None => (0..t.ncols()).collect(),
            };
            let rows: Vec<usize> = (0..t.nrows())
                .filter(|&r| idx.iter().all(|&i| !t.columns()[i].data().is_null(r)))
                .collect();
            Arc::new(t.take_rows(&rows))
        }
        TableExpr::Dedupe { input, by } => {
            let t = eval_table(input, env)?;
            let idx = match by {
                Some(ids) => column_indices(&t, ids)?,
                None => (0..t.ncols()).collect(),
            };
            let mut seen = HashSet::new();
            let rows: Vec<usize> = (0..t.nrows())
                .filter(|&r| {
                    let key: Vec<Key<'_>> =
                        idx.iter().map(|&i| key_at(t.columns()[i].data(), r)).collect();
                    seen.insert(key)
                })
                .collect();
            Arc::new(t.take_rows(&rows))
        }
        TableExpr::Sort {
            input,
            by,
            descending,
        } => {
            let t = eval_table(input, env)?;
            let i = column_indices(&t, std::slice::from_ref(by))?[0];
            let rows = sort_rows(t.columns()[i].data(), *descending);
            Arc::new(t.take_rows(&rows))
        }
        TableExpr::Head { input, n } => {
            let t = eval_table(input, env)?;
            let n = (*n).min(t.nrows() as u64) as usize;
            let rows: Vec<usize> = (0..n).collect();
            Arc::new(t.take_rows(&rows))
        }
    })
}
