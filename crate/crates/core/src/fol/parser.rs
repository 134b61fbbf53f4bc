//! Recursive-descent parser over token streams.
//!
//! Binding tightness, loosest to tightest: ↔ < → < ⊕ < ∨ < ∧ < ¬ <
//! quantifiers/atoms. Implication and biconditional are right-associative,
//! the other binaries left-associative, parentheses override. A quantifier's
//! body is the next unary-level expression, so `∀x ∀y (φ)` nests naturally
//! and `∀x (φ)` scopes over the whole group.
//!
//! The same machinery parses MINIFOL and CLIF: their lexers produce the same
//! token kinds, so `parse_tokens` is shared and only the lexing differs.

use super::{FolError, ParseTree, SourceToken, TokenKind, TreeLabel};
use crate::formula::{Formula, Term};

/// Parse result carrying both the concrete tree and the lowered formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOutcome {
    pub tree: ParseTree,
    pub formula: Formula,
}

/// Parses FOL text into a well-scoped formula.
pub fn parse_fol(text: &str) -> Result<Formula, FolError> {
    parse_fol_tree(text).map(|o| o.formula)
}

/// Parses FOL text, keeping the concrete parse tree.
pub fn parse_fol_tree(text: &str) -> Result<ParseOutcome, FolError> {
    let tokens = super::tokenize_fol(text)?;
    let tree = parse_tokens(&tokens, text.chars().count())?;
    let formula = lower(&tree, &mut Vec::new());
    Ok(ParseOutcome { tree, formula })
}

/// Parses a full token stream into a parse tree. `end_offset` is used for
/// end-of-input error positions.
pub(crate) fn parse_tokens(
    tokens: &[SourceToken],
    end_offset: usize,
) -> Result<ParseTree, FolError> {
    let mut p = Parser { tokens, pos: 0, end_offset };
    let tree = p.formula()?;
    if let Some(tok) = p.peek() {
        return Err(FolError::Parse {
            offset: tok.offset,
            expected: vec!["end of input".into(), "operator".into()],
        });
    }
    Ok(tree)
}

/// Lowers a parse tree to a formula. Identifiers bound by an enclosing
/// quantifier become variables; everything else is a constant, so the result
/// is closed by construction.
pub(crate) fn lower(tree: &ParseTree, bound: &mut Vec<String>) -> Formula {
    match tree {
        ParseTree::Node { label: TreeLabel::Group, children } => lower(&children[1], bound),
        ParseTree::Node { label: TreeLabel::Formula, children } => {
            let op = leaf_kind(&children[1]);
            let l = lower(&children[0], bound);
            let r = lower(&children[2], bound);
            match op {
                TokenKind::And => Formula::and(l, r),
                TokenKind::Or => Formula::or(l, r),
                TokenKind::Xor => Formula::xor(l, r),
                TokenKind::Implies => Formula::implies(l, r),
                TokenKind::Iff => Formula::iff(l, r),
                other => unreachable!("binary node with operator {other:?}"),
            }
        }
        ParseTree::Node { label: TreeLabel::Negation, children } => {
            Formula::not(lower(&children[1], bound))
        }
        ParseTree::Node { label: TreeLabel::Quantified, children } => {
            let kind = leaf_kind(&children[0]);
            let var = node_ident(&children[1]);
            bound.push(var.clone());
            let body = lower(&children[2], bound);
            bound.pop();
            match kind {
                TokenKind::Forall => Formula::forall(var, body),
                TokenKind::Exists => Formula::exists(var, body),
                other => unreachable!("quantifier node with {other:?}"),
            }
        }
        ParseTree::Node { label: TreeLabel::Atom, children } => {
            let predicate = node_ident(&children[0]);
            let mut args = Vec::new();
            if let Some(ParseTree::Node { label: TreeLabel::Arguments, children: arg_nodes }) =
                children.get(2)
            {
                for node in arg_nodes {
                    if let ParseTree::Node { label: TreeLabel::Term, .. } = node {
                        args.push(resolve_term(&node_ident(node), bound));
                    }
                }
            }
            Formula::Atom { predicate, args }
        }
        ParseTree::Node { label: TreeLabel::Equality, children } => {
            let lhs = resolve_term(&node_ident(&children[0]), bound);
            let rhs = resolve_term(&node_ident(&children[2]), bound);
            Formula::Atom { predicate: "=".into(), args: vec![lhs, rhs] }
        }
        other => unreachable!("cannot lower {other:?}"),
    }
}

fn resolve_term(name: &str, bound: &[String]) -> Term {
    if bound.iter().any(|b| b == name) {
        Term::variable(name)
    } else {
        Term::constant(name)
    }
}

fn leaf_kind(tree: &ParseTree) -> TokenKind {
    match tree {
        ParseTree::Leaf(t) => t.kind,
        _ => unreachable!("expected leaf"),
    }
}

fn node_ident(tree: &ParseTree) -> String {
    match tree {
        ParseTree::Node { children, .. } => match &children[0] {
            ParseTree::Leaf(t) => t.lexeme.clone(),
            _ => unreachable!("expected identifier leaf"),
        },
        ParseTree::Leaf(t) => t.lexeme.clone(),
    }
}

struct Parser<'t> {
    tokens: &'t [SourceToken],
    pos: usize,
    end_offset: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&SourceToken> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.end_offset)
    }

    fn bump(&mut self) -> SourceToken {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<SourceToken, FolError> {
        match self.peek() {
            Some(t) if t.kind == kind => Ok(self.bump()),
            _ => Err(FolError::Parse { offset: self.here(), expected: vec![expected.into()] }),
        }
    }

    fn formula(&mut self) -> Result<ParseTree, FolError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<ParseTree, FolError> {
        let l = self.implication()?;
        if self.peek_kind() == Some(TokenKind::Iff) {
            let op = self.bump();
            let r = self.iff()?;
            return Ok(binary(l, op, r));
        }
        Ok(l)
    }

    fn implication(&mut self) -> Result<ParseTree, FolError> {
        let l = self.xor()?;
        if self.peek_kind() == Some(TokenKind::Implies) {
            let op = self.bump();
            let r = self.implication()?;
            return Ok(binary(l, op, r));
        }
        Ok(l)
    }

    fn xor(&mut self) -> Result<ParseTree, FolError> {
        let mut l = self.or()?;
        while self.peek_kind() == Some(TokenKind::Xor) {
            let op = self.bump();
            let r = self.or()?;
            l = binary(l, op, r);
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<ParseTree, FolError> {
        let mut l = self.and()?;
        while self.peek_kind() == Some(TokenKind::Or) {
            let op = self.bump();
            let r = self.and()?;
            l = binary(l, op, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<ParseTree, FolError> {
        let mut l = self.unary()?;
        while self.peek_kind() == Some(TokenKind::And) {
            let op = self.bump();
            let r = self.unary()?;
            l = binary(l, op, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<ParseTree, FolError> {
        match self.peek_kind() {
            Some(TokenKind::Not) => {
                let op = self.bump();
                let child = self.unary()?;
                Ok(ParseTree::node(TreeLabel::Negation, vec![ParseTree::leaf(op), child]))
            }
            Some(TokenKind::Forall) | Some(TokenKind::Exists) => {
                let q = self.bump();
                let var = self.expect(TokenKind::Ident, "variable")?;
                let var_node =
                    ParseTree::node(TreeLabel::Variable, vec![ParseTree::leaf(var)]);
                let body = self.unary()?;
                Ok(ParseTree::node(
                    TreeLabel::Quantified,
                    vec![ParseTree::leaf(q), var_node, body],
                ))
            }
            Some(TokenKind::LParen) => {
                let lp = self.bump();
                let inner = self.formula()?;
                let rp = self.expect(TokenKind::RParen, ")")?;
                Ok(ParseTree::node(
                    TreeLabel::Group,
                    vec![ParseTree::leaf(lp), inner, ParseTree::leaf(rp)],
                ))
            }
            Some(TokenKind::Ident) => self.atom_or_equality(),
            _ => Err(FolError::Parse {
                offset: self.here(),
                expected: vec![
                    "identifier".into(),
                    "(".into(),
                    "¬".into(),
                    "∀".into(),
                    "∃".into(),
                ],
            }),
        }
    }

    fn atom_or_equality(&mut self) -> Result<ParseTree, FolError> {
        let ident = self.bump();
        match self.peek_kind() {
            Some(TokenKind::LParen) => {
                let pred =
                    ParseTree::node(TreeLabel::Predicate, vec![ParseTree::leaf(ident)]);
                let lp = self.bump();
                let mut children = vec![pred, ParseTree::leaf(lp)];
                if self.peek_kind() == Some(TokenKind::RParen) {
                    children.push(ParseTree::leaf(self.bump()));
                    return Ok(ParseTree::node(TreeLabel::Atom, children));
                }
                let args = self.arguments()?;
                children.push(args);
                let rp = self.expect(TokenKind::RParen, ")")?;
                children.push(ParseTree::leaf(rp));
                Ok(ParseTree::node(TreeLabel::Atom, children))
            }
            Some(TokenKind::Eq) => {
                let lhs = ParseTree::node(TreeLabel::Term, vec![ParseTree::leaf(ident)]);
                let eq = self.bump();
                let rhs_tok = self.expect(TokenKind::Ident, "identifier")?;
                let rhs = ParseTree::node(TreeLabel::Term, vec![ParseTree::leaf(rhs_tok)]);
                Ok(ParseTree::node(
                    TreeLabel::Equality,
                    vec![lhs, ParseTree::leaf(eq), rhs],
                ))
            }
            _ => {
                let pred =
                    ParseTree::node(TreeLabel::Predicate, vec![ParseTree::leaf(ident)]);
                Ok(ParseTree::node(TreeLabel::Atom, vec![pred]))
            }
        }
    }

    fn arguments(&mut self) -> Result<ParseTree, FolError> {
        let mut children = Vec::new();
        loop {
            let tok = self.expect(TokenKind::Ident, "identifier")?;
            children.push(ParseTree::node(TreeLabel::Term, vec![ParseTree::leaf(tok)]));
            if self.peek_kind() == Some(TokenKind::Comma) {
                children.push(ParseTree::leaf(self.bump()));
            } else {
                break;
            }
        }
        Ok(ParseTree::node(TreeLabel::Arguments, children))
    }
}

fn binary(l: ParseTree, op: SourceToken, r: ParseTree) -> ParseTree {
    ParseTree::node(TreeLabel::Formula, vec![l, ParseTree::leaf(op), r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Formula, Term};

    fn var(n: &str) -> Term {
        Term::variable(n)
    }

    fn con(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn parses_table_shaped_implication() {
        let f = parse_fol(
            "∀x ((Employee(x) ∧ Schedule(x, meeting, customers)) → AppearIn(x, company))",
        )
        .unwrap();
        let expected = Formula::forall(
            "x",
            Formula::implies(
                Formula::and(
                    Formula::atom("Employee", vec![var("x")]),
                    Formula::atom(
                        "Schedule",
                        vec![var("x"), con("meeting"), con("customers")],
                    ),
                ),
                Formula::atom("AppearIn", vec![var("x"), con("company")]),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_negated_xor() {
        let f = parse_fol("¬(Manager(james) ⊕ AppearIn(james, company))").unwrap();
        let expected = Formula::not(Formula::xor(
            Formula::atom("Manager", vec![con("james")]),
            Formula::atom("AppearIn", vec![con("james"), con("company")]),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_bare_atom() {
        assert_eq!(
            parse_fol("P(a)").unwrap(),
            Formula::atom("P", vec![con("a")])
        );
    }

    #[test]
    fn nested_quantifiers_nest_unary() {
        let f = parse_fol("∀x ∀y (FlyFrom(x, y) ⊕ FlyTo(x, y))").unwrap();
        let expected = Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::xor(
                    Formula::atom("FlyFrom", vec![var("x"), var("y")]),
                    Formula::atom("FlyTo", vec![var("x"), var("y")]),
                ),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn and_is_left_associative() {
        let f = parse_fol("P(a) ∧ Q(a) ∧ R(a)").unwrap();
        let expected = Formula::and(
            Formula::and(
                Formula::atom("P", vec![con("a")]),
                Formula::atom("Q", vec![con("a")]),
            ),
            Formula::atom("R", vec![con("a")]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn implies_is_right_associative() {
        let f = parse_fol("P(a) → Q(a) → R(a)").unwrap();
        let expected = Formula::implies(
            Formula::atom("P", vec![con("a")]),
            Formula::implies(
                Formula::atom("Q", vec![con("a")]),
                Formula::atom("R", vec![con("a")]),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_ladder() {
        // ¬ binds tighter than ∧ tighter than ∨ tighter than ⊕ tighter than →.
        let f = parse_fol("¬P(a) ∧ Q(a) ∨ R(a) ⊕ S(a) → T(a)").unwrap();
        let expected = Formula::implies(
            Formula::xor(
                Formula::or(
                    Formula::and(
                        Formula::not(Formula::atom("P", vec![con("a")])),
                        Formula::atom("Q", vec![con("a")]),
                    ),
                    Formula::atom("R", vec![con("a")]),
                ),
                Formula::atom("S", vec![con("a")]),
            ),
            Formula::atom("T", vec![con("a")]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn equality_atoms() {
        let f = parse_fol("∀x (P(x) → x = james)").unwrap();
        let expected = Formula::forall(
            "x",
            Formula::implies(
                Formula::atom("P", vec![var("x")]),
                Formula::atom("=", vec![var("x"), con("james")]),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn xor_chains_left_associatively() {
        let f = parse_fol("P(a) ⊕ Q(a) ⊕ R(a)").unwrap();
        let expected = Formula::xor(
            Formula::xor(
                Formula::atom("P", vec![con("a")]),
                Formula::atom("Q", vec![con("a")]),
            ),
            Formula::atom("R", vec![con("a")]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parsed_formulas_are_closed() {
        for text in [
            "P(x)",
            "∀x (P(x) ∧ Q(y))",
            "∃x (R(x, z))",
        ] {
            let f = parse_fol(text).unwrap();
            assert!(f.free_variables().is_empty(), "{text}");
        }
    }

    #[test]
    fn reports_offset_and_expectations() {
        let err = parse_fol("P(a) ∧").unwrap_err();
        assert_eq!(
            err,
            FolError::Parse {
                offset: 6,
                expected: vec![
                    "identifier".into(),
                    "(".into(),
                    "¬".into(),
                    "∀".into(),
                    "∃".into()
                ],
            }
        );

        let err = parse_fol("P(a").unwrap_err();
        assert!(matches!(err, FolError::Parse { offset: 3, .. }));

        let err = parse_fol("P(a)) ").unwrap_err();
        assert!(matches!(err, FolError::Parse { offset: 4, .. }));
    }

    #[test]
    fn parse_is_deterministic() {
        let text = "∀x (Manager(x) → ¬Work(x, home))";
        assert_eq!(parse_fol(text).unwrap(), parse_fol(text).unwrap());
    }
}
