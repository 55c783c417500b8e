use super::{Elem, FpqError, FpqTree, NodeKind, Shape};

pub(super) fn render(t: &FpqTree, label: &dyn Fn(Elem) -> String) -> String {
    let mut out = String::new();
    write_node(t, 0, label, &mut out);
    out
}

fn write_node(t: &FpqTree, id: usize, label: &dyn Fn(Elem) -> String, out: &mut String) {
    match t.kind(id) {
        NodeKind::Leaf(e) => out.push_str(&label(e)),
        kind => {
            out.push('(');
            out.push_str(&kind.token().to_string());
            for &c in t.children(id) {
                out.push(' ');
                write_node(t, c, label, out);
            }
            out.push(')');
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                tokens.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                tokens.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

pub(super) fn parse(text: &str, resolve: &dyn Fn(&str) -> Option<Elem>) -> Result<Shape, FpqError> {
    let tokens = tokenize(text);
    let err = |position: usize, message: &str| FpqError::Parse { position, message: message.to_owned() };
    // Stack of open nodes: (kind, children).
    let mut stack: Vec<(NodeKind, Vec<Shape>)> = Vec::new();
    let mut result: Option<Shape> = None;
    let mut i = 0;
    while i < tokens.len() {
        if result.is_some() {
            return Err(err(i, "trailing tokens"));
        }
        let tok = tokens[i].as_str();
        let finished = match tok {
            "(" => {
                let kind = match tokens.get(i + 1).map(String::as_str) {
                    Some("F") => NodeKind::F,
                    Some("P") => NodeKind::P,
                    Some("Q") => NodeKind::Q,
                    _ => return Err(err(i + 1, "expected F, P or Q after `(`")),
                };
                stack.push((kind, Vec::new()));
                i += 2;
                continue;
            }
            ")" => {
                let (kind, children) = stack.pop().ok_or_else(|| err(i, "unbalanced `)`"))?;
                Shape::Node(kind, children)
            }
            atom => Shape::Leaf(resolve(atom).ok_or_else(|| err(i, &format!("unknown leaf `{atom}`")))?),
        };
        match stack.last_mut() {
            Some((_, children)) => children.push(finished),
            None => result = Some(finished),
        }
        i += 1;
    }
    if !stack.is_empty() {
        return Err(err(tokens.len(), "unclosed `(`"));
    }
    result.ok_or_else(|| err(0, "empty input"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render_round_trip() {
        for s in ["(F 0 (Q 1 2 3 4))", "(Q 7)", "(P (Q 0 1) 2 3)"] {
            assert_eq!(FpqTree::parse_sexpr(s).unwrap().to_sexpr(), s);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "(F 0 1", "(X 0 1)", "(F 0 1))", "(F 0 z)", "(F 0 1) 2"] {
            assert!(FpqTree::parse_sexpr(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn named_leaves() {
        let names = ["a", "b", "c"];
        let resolve = |s: &str| names.iter().position(|&n| n == s);
        let t = FpqTree::parse_sexpr_with("(Q a (F b c))", &resolve).unwrap();
        assert_eq!(t.to_sexpr_with(&|e| names[e].to_string()), "(Q a (F b c))");
    }
}
