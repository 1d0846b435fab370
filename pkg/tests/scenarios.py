"""Hand-built plans for the monitor tests."""

from plancheck import GroundAction, ObjectRef, Plan

GENDER_OF_TAXI = {"taxi1": "male", "taxi2": "female", "taxi3": "other"}
HOME = {"taxi1": ("person1", "loc1"), "taxi2": ("person2", "loc2"), "taxi3": ("person3", "loc3")}
AWAY = {"loc1": "loc2", "loc2": "loc3", "loc3": "loc1"}


def shuttle_plan(drivers: list[str]) -> Plan:
    """One drive_passenger per entry; each taxi ferries its own passenger back
    and forth from the taxi problem's initial positions, so the plan is always valid."""
    where = {t: loc for t, (_, loc) in HOME.items()}
    home = {t: loc for t, (_, loc) in HOME.items()}
    actions = []
    for t in drivers:
        person, _ = HOME[t]
        src = where[t]
        dst = AWAY[home[t]] if src == home[t] else home[t]
        actions.append(GroundAction("drive_passenger", (
            ObjectRef(t, "taxi"), ObjectRef(person, "person"),
            ObjectRef(src, "location"), ObjectRef(dst, "location"),
        )))
        where[t] = dst
    return Plan(actions)


# 9 rounds of (male, female, other), then male, female, male: 30 trips at
# (11, 10, 9), all fair; the 31st trip (male) makes it (12, 10, 9).
SKEWED_DRIVERS = ["taxi1", "taxi2", "taxi3"] * 9 + ["taxi1", "taxi2", "taxi1", "taxi1"]
