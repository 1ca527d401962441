//! Characterization file format: an ambient group (inline block or a `use`
//! reference to a group file), then one subgroup per variable.
//!
//! ```text
//! use <path>             # or an inline 'group <label>' / 'kind ...' block
//! var <id> subgroup <e1> <e2> ...
//! ```

use std::collections::BTreeMap;

use super::{CharError, GroupCharacterization};
use crate::group::{parse_group_file, Subgroup};
use crate::parse_util::{parse_usize, tokenized_lines, ParseError};

/// Parses with a loader that resolves `use <path>` references to file
/// contents (the CLI passes a filesystem loader).
pub fn parse_characterization_with(
    text: &str,
    load: &dyn Fn(&str) -> Result<String, String>,
) -> Result<GroupCharacterization, CharError> {
    let lines = tokenized_lines(text);
    let idx;

    let group = match lines.first() {
        Some((line, tokens)) if tokens[0] == "use" => {
            if tokens.len() != 2 {
                return Err(ParseError::new(*line, "expected 'use <path>'").into());
            }
            let content = load(tokens[1])
                .map_err(|e| ParseError::new(*line, format!("cannot load group file: {e}")))?;
            idx = 1;
            parse_group_file(&content).map_err(CharError::Syntax)?.group
        }
        Some((line, tokens)) if tokens[0] == "group" => {
            // inline block: group + kind (+ table rows); ends at the first 'var'
            let end = lines
                .iter()
                .position(|(_, t)| t[0] == "var")
                .unwrap_or(lines.len());
            let block: String = text
                .lines()
                .enumerate()
                .filter(|(i, _)| {
                    let lineno = i + 1;
                    lines[..end].iter().any(|(l, _)| *l == lineno)
                })
                .map(|(_, raw)| format!("{raw}\n"))
                .collect();
            idx = end;
            let _ = (line, tokens);
            parse_group_file(&block).map_err(CharError::Syntax)?.group
        }
        _ => {
            return Err(ParseError::new(1, "expected 'use <path>' or an inline group block").into())
        }
    };

    let mut assignment = BTreeMap::new();
    for (line, tokens) in &lines[idx..] {
        if tokens[0] != "var" || tokens.len() < 4 || tokens[2] != "subgroup" {
            return Err(ParseError::new(*line, "expected 'var <id> subgroup <e1> ...'").into());
        }
        let elements: Vec<usize> = tokens[3..]
            .iter()
            .map(|t| parse_usize(t, *line, "element index"))
            .collect::<Result<_, _>>()?;
        let sub = Subgroup::new(group.clone(), elements)
            .map_err(|e| ParseError::new(*line, e.to_string()))?;
        if assignment.insert(tokens[1].to_string(), sub).is_some() {
            return Err(
                ParseError::new(*line, format!("variable {} assigned twice", tokens[1])).into(),
            );
        }
    }
    GroupCharacterization::new(group, assignment)
}

/// Parses a characterization whose group is declared inline (no `use`).
pub fn parse_characterization(text: &str) -> Result<GroupCharacterization, CharError> {
    parse_characterization_with(text, &|path| Err(format!("no loader for '{path}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_group_block() {
        let c = parse_characterization(
            "group v4\nkind cyclic 2 2\nvar s1 subgroup 0 1\nvar e subgroup 0 3\n",
        )
        .unwrap();
        assert_eq!(c.group().order(), 4);
        assert_eq!(c.subgroup("e").unwrap().elements(), &[0, 3]);
    }

    #[test]
    fn use_reference_through_loader() {
        let loader = |path: &str| {
            if path == "z4.grp" {
                Ok("group z4\nkind cyclic 4\n".to_string())
            } else {
                Err("not found".to_string())
            }
        };
        let c = parse_characterization_with("use z4.grp\nvar x subgroup 0 2\n", &loader).unwrap();
        assert_eq!(c.group().order(), 4);
    }

    #[test]
    fn bad_subgroup_line_reported() {
        let err =
            parse_characterization("group g\nkind cyclic 4\nvar x subgroup 0 1\n").unwrap_err();
        match err {
            CharError::Syntax(e) => assert_eq!(e.line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
