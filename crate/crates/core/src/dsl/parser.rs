//! Recursive-descent parser. Produces the whole program or the first error;
//! nothing is evaluated here.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, Span};

pub fn parse(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    Parser { tokens, pos: 0 }.program()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

const TEXPR_START: &[&str] = &[
    "identifier", "`filter`", "`select`", "`drop`", "`mutate`", "`dropna`", "`dedupe`", "`sort`",
    "`head`",
];

impl Parser {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let tok = &self.tokens[self.pos];
        ParseError {
            line: tok.span.line,
            column: tok.span.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.kind.to_string(),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), TokenKind::Keyword(k) if *k == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Span, ParseError> {
        if *self.peek() == kind {
            Ok(self.advance().span)
        } else {
            Err(self.error(&[&kind.to_string()]))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            TokenKind::Ident(_) => {
                let tok = self.advance();
                let TokenKind::Ident(name) = tok.kind else {
                    unreachable!()
                };
                Ok(Ident {
                    name,
                    span: tok.span,
                })
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>, ParseError> {
        let mut out = vec![self.ident()?];
        while self.eat(&TokenKind::Comma) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn program(mut self) -> Result<Program, ParseError> {
        let mut statements = Vec::new();
        loop {
            while self.eat(&TokenKind::Newline) {}
            if *self.peek() == TokenKind::Eof {
                return Ok(Program { statements });
            }
            statements.push(self.statement()?);
            match self.peek() {
                TokenKind::Newline | TokenKind::Eof => {}
                _ => return Err(self.error(&["end of line"])),
            }
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let start = self.span();
        let kind = if self.eat_keyword("load") {
            let path = match self.peek() {
                TokenKind::Str(_) => match self.advance().kind {
                    TokenKind::Str(s) => s,
                    _ => unreachable!(),
                },
                _ => return Err(self.error(&["string"])),
            };
            self.expect_keyword("as")?;
            StatementKind::Load {
                path,
                name: self.ident()?,
            }
        } else if self.eat_keyword("plot") {
            let table = self.ident()?;
            self.expect(TokenKind::Dot)?;
            let column = self.ident()?;
            self.expect_keyword("as")?;
            let kind = match self.peek() {
                TokenKind::Ident(s) => PlotKind::from_name(s),
                _ => None,
            }
            .ok_or_else(|| self.error(&["`histogram`", "`topk`", "`timeline`"]))?;
            self.advance();
            StatementKind::Plot {
                table,
                column,
                kind,
            }
        } else if matches!(self.peek(), TokenKind::Ident(_))
            && *self.peek_at(1) == TokenKind::Assign
        {
            let name = self.ident()?;
            self.advance();
            StatementKind::Assign {
                name,
                expr: self.texpr()?,
            }
        } else if self.at_texpr_start() {
            StatementKind::Expr(self.texpr()?)
        } else {
            let mut expected = vec!["`load`", "`plot`"];
            expected.extend_from_slice(TEXPR_START);
            return Err(self.error(&expected));
        };
        Ok(Statement {
            kind,
            span: start.to(self.prev_span()),
        })
    }

    fn at_texpr_start(&self) -> bool {
        match self.peek() {
            TokenKind::Ident(_) => true,
            TokenKind::Keyword(k) => matches!(
                *k,
                "filter" | "select" | "drop" | "mutate" | "dropna" | "dedupe" | "sort" | "head"
            ),
            _ => false,
        }
    }

    fn texpr(&mut self) -> Result<TableExpr, ParseError> {
        if !self.at_texpr_start() {
            return Err(self.error(TEXPR_START));
        }
        if let TokenKind::Ident(_) = self.peek() {
            return Ok(TableExpr::Name(self.ident()?));
        }
        let TokenKind::Keyword(kw) = self.advance().kind else {
            unreachable!()
        };
        let input = Box::new(self.texpr()?);
        Ok(match kw {
            "filter" => {
                self.expect_keyword("where")?;
                TableExpr::Filter {
                    input,
                    predicate: self.expr()?,
                }
            }
            "select" => {
                self.expect_keyword("cols")?;
                TableExpr::Select {
                    input,
                    columns: self.ident_list()?,
                }
            }
            "drop" => {
                self.expect_keyword("cols")?;
                TableExpr::Drop {
                    input,
                    columns: self.ident_list()?,
                }
            }
            "mutate" => {
                self.expect_keyword("set")?;
                let column = self.ident()?;
                self.expect(TokenKind::Assign)?;
                TableExpr::Mutate {
                    input,
                    column,
                    value: self.expr()?,
                }
            }
            "dropna" => TableExpr::DropNa {
                input,
                columns: if self.eat_keyword("cols") {
                    Some(self.ident_list()?)
                } else {
                    None
                },
            },
            "dedupe" => TableExpr::Dedupe {
                input,
                by: if self.eat_keyword("by") {
                    Some(self.ident_list()?)
                } else {
                    None
                },
            },
            "sort" => {
                self.expect_keyword("by")?;
                let by = self.ident()?;
                let descending = if self.eat_keyword("asc") {
                    false
                } else if self.eat_keyword("desc") {
                    true
                } else {
                    return Err(self.error(&["`asc`", "`desc`"]));
                };
                TableExpr::Sort {
                    input,
                    by,
                    descending,
                }
            }
            "head" => match *self.peek() {
                TokenKind::Int(n) if n >= 0 => {
                    self.advance();
                    TableExpr::Head {
                        input,
                        n: n as u64,
                    }
                }
                _ => return Err(self.error(&["non-negative integer"])),
            },
            _ => unreachable!("checked by at_texpr_start"),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.or_expr()
    }

    fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        let span = lhs.span().to(rhs.span());
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            span,
        }
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr()?;
        while self.eat_keyword("or") {
            let rhs = self.and_expr()?;
            lhs = Self::binary(BinaryOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.not_expr()?;
        while self.eat_keyword("and") {
            let rhs = self.not_expr()?;
            lhs = Self::binary(BinaryOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        let start = self.span();
        if self.eat_keyword("not") {
            let inner = self.not_expr()?;
            return Ok(Expr::Unary {
                op: UnaryOp::Not,
                span: start.to(inner.span()),
                expr: Box::new(inner),
            });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            TokenKind::Eq => BinaryOp::Eq,
            TokenKind::Ne => BinaryOp::Ne,
            TokenKind::Lt => BinaryOp::Lt,
            TokenKind::Le => BinaryOp::Le,
            TokenKind::Gt => BinaryOp::Gt,
            TokenKind::Ge => BinaryOp::Ge,
            _ => return Ok(lhs),
        };
        self.advance();
        let rhs = self.additive()?;
        Ok(Self::binary(op, lhs, rhs))
    }

    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => BinaryOp::Add,
                TokenKind::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.multiplicative()?;
            lhs = Self::binary(op, lhs, rhs);
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => BinaryOp::Mul,
                TokenKind::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Self::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let start = self.span();
        if self.eat(&TokenKind::Minus) {
            let inner = self.unary()?;
            return Ok(Expr::Unary {
                op: UnaryOp::Neg,
                span: start.to(inner.span()),
                expr: Box::new(inner),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        let lit = match self.peek() {
            TokenKind::Int(i) => Some(Literal::Int(*i)),
            TokenKind::Float(f) => Some(Literal::Float(*f)),
            TokenKind::Str(s) => Some(Literal::Str(s.clone())),
            TokenKind::Keyword("true") => Some(Literal::Bool(true)),
            TokenKind::Keyword("false") => Some(Literal::Bool(false)),
            _ => None,
        };
        if let Some(lit) = lit {
            self.advance();
            return Ok(Expr::Literal(lit, span));
        }
        if self.eat(&TokenKind::LParen) {
            let inner = self.expr()?;
            self.expect(TokenKind::RParen)?;
            return Ok(inner);
        }
        if !matches!(self.peek(), TokenKind::Ident(_)) {
            return Err(self.error(&["expression"]));
        }
        let name = self.ident()?;
        if self.eat(&TokenKind::LParen) {
            let mut args = Vec::new();
            if *self.peek() != TokenKind::RParen {
                args.push(self.expr()?);
                while self.eat(&TokenKind::Comma) {
                    args.push(self.expr()?);
                }
            }
            let close = self.expect(TokenKind::RParen)?;
            return Ok(Expr::Call {
                span: name.span.to(close),
                func: name,
                args,
            });
        }
        if self.eat(&TokenKind::Dot) {
            let column = self.ident()?;
            return Ok(Expr::Qualified {
                table: name,
                column,
            });
        }
        Ok(Expr::Column(name))
    }
}
