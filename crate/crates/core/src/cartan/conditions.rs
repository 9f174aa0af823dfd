use crate::expr::Expression;

use super::structure::StructureFunctions;

/// One reduction condition with the residual that decides it.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    /// 1: torsion-free identification, 2: horizontal curvature, 3: integrability.
    pub group: u8,
    pub residual: Expression,
}

impl Condition {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// The ten conditions under which the structure equations become those of a
/// Levi-Civita connection of an Einstein metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(Condition::holds)
    }

    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

pub fn check_einstein_conditions(sf: &StructureFunctions) -> ConditionReport {
    let cond = |name, group, residual: &Expression| Condition {
        name,
        group,
        residual: residual.clone(),
    };
    ConditionReport {
        conditions: vec![
            cond("c=0", 1, sf.c()),
            cond("l=0", 1, sf.l()),
            cond("r=0", 1, sf.r()),
            cond("s=0", 1, sf.s()),
            cond("m=0", 2, sf.m()),
            cond("a=0", 2, sf.a()),
            cond("g=0", 2, sf.g()),
            cond("f=-b", 2, &(sf.f() + sf.b())),
            cond("b=0", 3, sf.b()),
            cond("h=0", 3, sf.h()),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::int;

    #[test]
    fn zero_functions_pass_and_f_plus_b_is_checked() {
        assert!(check_einstein_conditions(&StructureFunctions::zero()).all_hold());
        let mut v: [Expression; 13] = std::array::from_fn(|_| Expression::zero());
        v[1] = int(1); // b
        v[4] = int(-1); // f
        let r = check_einstein_conditions(&StructureFunctions::from_values(v));
        assert!(r.get("f=-b").unwrap().holds());
        assert!(!r.get("b=0").unwrap().holds());
        assert!(!r.all_hold());
        assert_eq!(r.conditions.len(), 10);
    }
}
