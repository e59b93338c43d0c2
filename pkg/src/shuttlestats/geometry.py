"""Court-zone vocabulary and the left-hander mirroring transform.

The serving team's court is split into nine numbered return zones laid out
as a 3x3 grid:

    front   | 1 | 2 | 3 |
    middle  | 4 | 5 | 6 |
    rear    | 7 | 8 | 9 |

Columns group into paths (left {1,4,7}, center {2,5,8}, right {3,6,9}) and
rows into depth bands (front {1,2,3}, middle {4,5,6}, rear {7,8,9}).  The
service landing area is the symbolic inside/middle/outside band at the
receiver's hitting point; no continuous coordinates are modeled because
nothing downstream consumes them.

All functions here are pure and total on valid zones.
"""

from __future__ import annotations

from dataclasses import replace
from enum import Enum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from shuttlestats.records import RoundRecord

ZONES = tuple(range(1, 10))


class ServiceSide(str, Enum):
    """Which service court the server is serving from."""

    LEFT = "Left"
    RIGHT = "Right"

    def flipped(self) -> "ServiceSide":
        return ServiceSide.RIGHT if self is ServiceSide.LEFT else ServiceSide.LEFT


class SlaArea(str, Enum):
    """Service landing band relative to the receiver's shoulders."""

    INSIDE = "Inside"
    MIDDLE = "Middle"
    OUTSIDE = "Outside"


class PathGroup(str, Enum):
    """Column grouping of the nine return zones."""

    LEFT = "Left"
    CENTER = "Center"
    RIGHT = "Right"


class DepthGroup(str, Enum):
    """Row grouping of the nine return zones."""

    FRONT = "Front"
    MIDDLE = "Middle"
    REAR = "Rear"


class FootFirst(str, Enum):
    """Foot the receiver steps out with first."""

    LEFT = "Left"
    RIGHT = "Right"

    def flipped(self) -> "FootFirst":
        return FootFirst.RIGHT if self is FootFirst.LEFT else FootFirst.LEFT


class GripType(str, Enum):
    """How the receiver grips the racket for the return."""

    FOREHAND = "Forehand"
    BACKHAND = "Backhand"


class Handedness(str, Enum):
    """Receiver's dominant hand."""

    LEFT = "Left"
    RIGHT = "Right"

    def flipped(self) -> "Handedness":
        return Handedness.RIGHT if self is Handedness.LEFT else Handedness.LEFT


_PATHS = {
    PathGroup.LEFT: frozenset({1, 4, 7}),
    PathGroup.CENTER: frozenset({2, 5, 8}),
    PathGroup.RIGHT: frozenset({3, 6, 9}),
}
_DEPTHS = {
    DepthGroup.FRONT: frozenset({1, 2, 3}),
    DepthGroup.MIDDLE: frozenset({4, 5, 6}),
    DepthGroup.REAR: frozenset({7, 8, 9}),
}

# Left/right reflection of the grid: columns 1 and 3 swap, column 2 is fixed.
_MIRROR = {1: 3, 3: 1, 4: 6, 6: 4, 7: 9, 9: 7, 2: 2, 5: 5, 8: 8}

CROSSING_ZONES = frozenset({2, 4, 5, 6, 8})
CORNER_ZONES = frozenset({1, 3, 7, 9})


def check_zone(zone: int) -> int:
    """Validate a return-zone number, returning it unchanged."""
    if not isinstance(zone, int) or isinstance(zone, bool) or not 1 <= zone <= 9:
        raise ValueError(f"return zone must be an integer in 1..9, got {zone!r}")
    return zone


def path_of(zone: int) -> PathGroup:
    """Path (grid column) containing the given return zone."""
    check_zone(zone)
    for path, members in _PATHS.items():
        if zone in members:
            return path
    raise AssertionError("unreachable")


def depth_of(zone: int) -> DepthGroup:
    """Depth band (grid row) containing the given return zone."""
    check_zone(zone)
    for depth, members in _DEPTHS.items():
        if zone in members:
            return depth
    raise AssertionError("unreachable")


def zone_at(depth: DepthGroup, path: PathGroup) -> int:
    """The unique zone at the intersection of a depth band and a path."""
    (zone,) = _DEPTHS[depth] & _PATHS[path]
    return zone


def mirror_zone(zone: int) -> int:
    """Reflect a return zone across the court's center path.

    Swaps 1<->3, 4<->6, 7<->9 and fixes the center-path zones 2, 5, 8;
    the map is an involution and preserves depth.
    """
    return _MIRROR[check_zone(zone)]


def mirror_round(record: "RoundRecord") -> "RoundRecord":
    """Left/right reflection of a full round record.

    Flips the serving side, the first-step foot, the receiver's dominant
    hand, and mirrors the return zone.  Grip and the service landing band
    are defined relative to the receiver's body, so they are unchanged.
    """
    return replace(
        record,
        service_from=record.service_from.flipped(),
        foot=record.foot.flipped(),
        rdh=record.rdh.flipped(),
        rla=mirror_zone(record.rla),
    )
