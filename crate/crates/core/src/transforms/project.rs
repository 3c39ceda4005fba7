use crate::model::Structure;
use crate::syntax::PlayerId;

/// Replaces every player's interpretation with player `i`'s.
///
/// Outermost-scope truth for viewpoint `i` in the input coincides with
/// truth in the output, where all players read propositions alike.
pub fn project_outermost(m: &Structure, i: PlayerId) -> Result<Structure, crate::model::ModelError> {
    m.check_player(i)?;
    let mut parts = m.to_parts();
    let own = parts.interpretations[i.index()].clone();
    for interp in &mut parts.interpretations {
        *interp = own.clone();
    }
    Structure::from_parts(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::semantics::{eval, Mode};
    use crate::syntax::parse;

    #[test]
    fn atd_projections() {
        let m = load("atd");
        let p1 = project_outermost(&m, pl(1)).unwrap();
        assert!(p1.is_common_interpretation());
        assert!(p1.true_props(pl(2), 0).iter().any(|p| p.as_str() == "p"));
        for mode in Mode::ALL.into_iter().filter(|m| !m.is_ai()) {
            assert!(eval(&p1, 0, pl(2), &parse("CB_{1,2}(p)").unwrap(), mode).unwrap());
        }
        let p2 = project_outermost(&m, pl(2)).unwrap();
        assert!(eval(&p2, 0, pl(1), &parse("CB_{1,2}(!p)").unwrap(), Mode::In).unwrap());
    }

    #[test]
    fn common_interpretation_is_fixed() {
        let m = load("example2");
        assert_eq!(project_outermost(&m, pl(2)).unwrap(), m);
        assert!(project_outermost(&m, pl(3)).is_err());
    }
}
