//! Group file format.
//!
//! ```text
//! group <label>
//! kind cyclic <n1> <n2> ...   # Z_n1 x ... in mixed-radix order
//! kind table <n>              # followed by n rows of n indices
//! kind sym <n>                # S_n, n <= 4, lexicographic one-line order
//! subgroup <label> <e1> <e2> ...
//! ```
//!
//! Tables whose identity is not index 0 are relabeled by swapping the
//! identity with 0; subgroup lines are interpreted in the file's original
//! indexing and remapped the same way.

use std::sync::Arc;

use super::{Elem, FiniteGroup, GroupError, Subgroup};
use crate::parse_util::{parse_usize, tokenized_lines, ParseError};

/// A parsed group file: the ambient group plus named subgroups.
#[derive(Clone, Debug)]
pub struct GroupFile {
    pub group: Arc<FiniteGroup>,
    pub subgroups: Vec<(String, Subgroup)>,
}

impl GroupFile {
    pub fn subgroup(&self, label: &str) -> Option<&Subgroup> {
        self.subgroups
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s)
    }
}

fn group_err(line: usize, err: GroupError) -> ParseError {
    ParseError::new(line, err.to_string())
}

pub fn parse_group_file(text: &str) -> Result<GroupFile, ParseError> {
    let lines = tokenized_lines(text);
    let mut iter = lines.into_iter().peekable();

    let (line, tokens) = iter
        .next()
        .ok_or_else(|| ParseError::new(1, "empty group file"))?;
    if tokens[0] != "group" || tokens.len() != 2 {
        return Err(ParseError::new(line, "expected 'group <label>'"));
    }
    let label = tokens[1].to_string();

    let (kind_line, kind_tokens) = iter
        .next()
        .ok_or_else(|| ParseError::new(line, "missing 'kind' line"))?;
    if kind_tokens[0] != "kind" || kind_tokens.len() < 2 {
        return Err(ParseError::new(
            kind_line,
            "expected 'kind cyclic|table|sym ...'",
        ));
    }

    // relabel[i] = new index of original element i; identity normalization
    let (group, relabel) = match kind_tokens[1] {
        "cyclic" => {
            if kind_tokens.len() < 3 {
                return Err(ParseError::new(
                    kind_line,
                    "expected 'kind cyclic <n1> ...'",
                ));
            }
            let factors: Vec<usize> = kind_tokens[2..]
                .iter()
                .map(|t| parse_usize(t, kind_line, "cyclic factor"))
                .collect::<Result<_, _>>()?;
            let g = FiniteGroup::cyclic_product(&factors).map_err(|e| group_err(kind_line, e))?;
            let n = g.order();
            (g.relabeled(label), (0..n).collect::<Vec<Elem>>())
        }
        "sym" => {
            if kind_tokens.len() != 3 {
                return Err(ParseError::new(kind_line, "expected 'kind sym <n>'"));
            }
            let n = parse_usize(kind_tokens[2], kind_line, "symmetric degree")?;
            let g = FiniteGroup::symmetric(n).map_err(|e| group_err(kind_line, e))?;
            let order = g.order();
            (g.relabeled(label), (0..order).collect::<Vec<Elem>>())
        }
        "table" => {
            if kind_tokens.len() != 3 {
                return Err(ParseError::new(kind_line, "expected 'kind table <n>'"));
            }
            let n = parse_usize(kind_tokens[2], kind_line, "table size")?;
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let (row_line, row_tokens) = iter.next().ok_or_else(|| {
                    ParseError::new(kind_line, format!("expected {n} table rows"))
                })?;
                let row: Vec<usize> = row_tokens
                    .iter()
                    .map(|t| parse_usize(t, row_line, "table entry"))
                    .collect::<Result<_, _>>()?;
                rows.push(row);
            }
            let g = FiniteGroup::from_table(label.clone(), &rows)
                .map_err(|e| group_err(kind_line, e))?;
            if g.identity() == 0 {
                ((g), (0..n).collect::<Vec<Elem>>())
            } else {
                let e = g.identity();
                let perm: Vec<Elem> = (0..n)
                    .map(|i| {
                        if i == 0 {
                            e
                        } else if i == e {
                            0
                        } else {
                            i
                        }
                    })
                    .collect();
                let mut new_rows = vec![vec![0usize; n]; n];
                for a in 0..n {
                    for b in 0..n {
                        new_rows[perm[a]][perm[b]] = perm[g.op(a, b)];
                    }
                }
                let g2 = FiniteGroup::from_table(label.clone(), &new_rows)
                    .map_err(|e| group_err(kind_line, e))?;
                (g2, perm)
            }
        }
        other => {
            return Err(ParseError::new(
                kind_line,
                format!("unknown kind '{other}'"),
            ))
        }
    };

    let group = group.into_arc();
    let mut subgroups = Vec::new();
    for (sub_line, tokens) in iter {
        if tokens[0] != "subgroup" || tokens.len() < 3 {
            return Err(ParseError::new(
                sub_line,
                "expected 'subgroup <label> <e1> ...'",
            ));
        }
        let sub_label = tokens[1].to_string();
        let elements: Vec<Elem> = tokens[2..]
            .iter()
            .map(|t| {
                let e = parse_usize(t, sub_line, "element index")?;
                if e >= group.order() {
                    return Err(ParseError::new(
                        sub_line,
                        format!("element {e} out of range"),
                    ));
                }
                Ok(relabel[e])
            })
            .collect::<Result<_, _>>()?;
        let sub = Subgroup::new(group.clone(), elements).map_err(|e| group_err(sub_line, e))?;
        subgroups.push((sub_label, sub));
    }

    Ok(GroupFile { group, subgroups })
}

impl FiniteGroup {
    fn relabeled(mut self, label: String) -> FiniteGroup {
        self.label = label;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cyclic_with_subgroup() {
        let file = parse_group_file("group z4\nkind cyclic 4\nsubgroup even 0 2\n").unwrap();
        assert_eq!(file.group.order(), 4);
        assert_eq!(file.subgroup("even").unwrap().elements(), &[0, 2]);
    }

    #[test]
    fn parses_table_and_normalizes_identity() {
        // Z2 written with identity at index 1
        let file = parse_group_file("group flipped\nkind table 2\n1 0\n0 1\n").unwrap();
        assert_eq!(file.group.identity(), 0);
        assert!(file.group.same_table(&FiniteGroup::cyclic(2).unwrap()));
    }

    #[test]
    fn parses_sym() {
        let file = parse_group_file("group s3\nkind sym 3\n").unwrap();
        assert_eq!(file.group.order(), 6);
        assert!(!file.group.is_abelian());
    }

    #[test]
    fn rejects_bad_subgroup_with_line_number() {
        let err = parse_group_file("group z4\nkind cyclic 4\nsubgroup bad 0 1\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn rejects_invalid_table() {
        let err = parse_group_file("group bad\nkind table 2\n0 1\n1 1\n").unwrap_err();
        assert!(err.message.contains("inverse"));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let file = parse_group_file("# header\ngroup z2 # trailing\n\nkind cyclic 2\n").unwrap();
        assert_eq!(file.group.order(), 2);
    }
}
