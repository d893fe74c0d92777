import json

import numpy as np
import pytest

from ftgates import concat
from ftgates.concat import COL, ROW, CostModel, Group, Move, MotionPlan, PlanError, Transfer


def test_t_costs():
    plan = concat.plan_logical_T()
    assert concat.cost(plan, include_transfers=False) == 240.0
    assert concat.cost(plan, CostModel(transfer_time=150)) == 840.0
    assert len(plan.transfers()) == 4


def test_h_worst_case():
    plan = concat.plan_logical_H(worst_case=True)
    assert concat.cost(plan, CostModel(transfer_time=150)) == 3760.0
    assert len(plan.transfers()) == 16
    best = concat.plan_logical_H(worst_case=False)
    assert concat.cost(best, include_transfers=False) == pytest.approx(1360.0 / 2)


@pytest.mark.parametrize("transfer", [100.0, 125.0, 150.0, 175.0, 200.0])
def test_affine_in_transfer_time(transfer):
    m = CostModel(transfer_time=transfer)
    assert concat.cost(concat.plan_logical_T(), m) == pytest.approx(240.0 + 4 * transfer)
    assert concat.cost(concat.plan_logical_H(), m) == pytest.approx(1360.0 + 16 * transfer)


def test_transfer_range_enforced():
    with pytest.raises(ValueError):
        CostModel(transfer_time=99.0)
    with pytest.raises(ValueError):
        CostModel(transfer_time=250.0)


def test_pulses_optional():
    plan = concat.plan_logical_T()
    off = concat.cost(plan)
    on = concat.cost(plan, CostModel(count_pulses=True))
    assert on - off == pytest.approx(0.2 * len(plan.pulses()))


def test_schedules():
    assert concat.schedule_of(concat.plan_logical_T(), "T").entangling_cycles == 4
    assert concat.schedule_of(concat.plan_logical_H(), "H").entangling_cycles == 8


def test_neighbour_row_distance():
    lay = concat.ConcatLayout()
    m = Move(Group(ROW, 1), 1, 6)
    assert concat.move_distance(m, lay) == 50.0


def test_plans_validate():
    concat.plan_logical_T().validate()
    concat.plan_logical_H().validate()
    with pytest.raises(PlanError):
        concat.plan_logical_T().validate(strict=True)


def test_move_without_pickup_rejected():
    plan = MotionPlan([Move(Group(ROW, 2), 2, 3)])
    with pytest.raises(PlanError):
        plan.validate()


def test_out_of_order_drop_rejected():
    a, b = Group(ROW, 1), Group(ROW, 2)
    plan = MotionPlan([Transfer(a, "OUT"), Transfer(b, "OUT"), Transfer(a, "IN"), Transfer(b, "IN")])
    with pytest.raises(PlanError):
        plan.validate()


def test_unreturned_group_rejected():
    with pytest.raises(PlanError):
        MotionPlan([Transfer(Group(COL, 3), "OUT")]).validate()


def test_wrong_start_rejected():
    g = Group(COL, 3)
    with pytest.raises(PlanError):
        MotionPlan([Transfer(g, "OUT"), Move(g, 4, 5), Move(g, 5, 4), Transfer(g, "IN")]).validate()


def test_reversed_plan_is_valid_and_same_cost():
    plan = concat.plan_logical_T()
    back = plan.reversed()
    back.validate()
    assert concat.cost(back) == concat.cost(plan)


def test_text_round_trip():
    plan = concat.plan_logical_H()
    again = concat.loads_plan(concat.dumps_plan(plan))
    assert again.steps == plan.steps


def test_loads_rejects_garbage():
    with pytest.raises(ValueError):
        concat.loads_plan("JUMP ROW 1")


def test_json_report():
    d = json.loads(concat.report(concat.plan_logical_T(), as_json=True))
    assert d["total_us"] == 840.0
    assert d["transfers"] == 4


def test_transversal_claims():
    checks = concat.verify_transversal_claims(1e-9)
    assert len(checks) == 5
    assert all(c.passed for c in checks), [(c.name, c.error) for c in checks]


def test_cnot_error_small():
    assert concat.transversal_cnot_error() < 1e-9


def test_layout_validation():
    with pytest.raises(ValueError):
        concat.ConcatLayout(handoff_offset=20.0)
    with pytest.raises(ValueError):
        concat.plan_logical_T(concat.ConcatLayout(rows=5))
    assert np.isclose(concat.ConcatLayout().atom_pitch, 10.0)
