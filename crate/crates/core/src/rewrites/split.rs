//! Splitting a guarded sentence into connected ones.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{classify, clause_structure, Clause, SnpSentence};

/// Connected sentences whose model classes have union equal to the model
/// class of `s`.
///
/// The first disconnected clause is split into the literals over the first
/// component of its clause structure and the rest; the sentence with the
/// first part comes before the sentence with the second, and both are split
/// further.
pub fn split_disconnected(s: &SnpSentence) -> Result<Vec<SnpSentence>> {
    let class = classify(s);
    if !class.guarded {
        return Err(Error::NotGuarded(
            class.witnesses.last().map(|w| w.to_string()).unwrap_or_default(),
        ));
    }
    let mut out = Vec::new();
    split_into(s, &mut out)?;
    Ok(out)
}

fn split_into(s: &SnpSentence, out: &mut Vec<SnpSentence>) -> Result<()> {
    let sig = s.full_signature();
    for (ci, c) in s.matrix().iter().enumerate() {
        let components = clause_structure(c, &sig).connected_components();
        if components.len() <= 1 {
            continue;
        }
        let vars = c.variables();
        let first: BTreeSet<usize> = components[0].iter().map(|&i| vars[i]).collect();
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for l in &c.literals {
            let inside = l.atom.args.iter().filter(|v| first.contains(v)).count();
            if inside == l.atom.args.len() {
                left.push(l.clone());
            } else if inside == 0 {
                right.push(l.clone());
            } else {
                return Err(Error::Internal(format!(
                    "literal {} of clause {} spans two components",
                    s.literal_text(l),
                    ci + 1
                )));
            }
        }
        for part in [left, right] {
            let mut matrix = s.matrix().to_vec();
            matrix[ci] = Clause::new(part);
            let mut seen = std::collections::HashSet::new();
            matrix.retain(|c| seen.insert(c.clone()));
            let t = SnpSentence::new(s.input_sig().clone(), s.exist_sig().clone(), s.variables().to_vec(), matrix)?;
            split_into(&t, out)?;
        }
        return Ok(());
    }
    out.push(s.clone());
    Ok(())
}
