"""Identities and canonical ordering of the 18 inertial channels.

Three body-worn IMUs (dominant hand, chest, dominant-side ankle) each
contribute a 3-axis accelerometer and a 3-axis gyroscope.  Every channel
vector in the package is laid out in one fixed order: location, then
sensor kind, then axis.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable, NamedTuple


class Location(IntEnum):
    HAND = 0
    CHEST = 1
    ANKLE = 2


class Kind(IntEnum):
    ACCEL = 0
    GYRO = 1


class Axis(IntEnum):
    X = 0
    Y = 1
    Z = 2


class ChannelId(NamedTuple):
    """One scalar signal channel.  Tuple comparison gives the canonical order."""

    location: Location
    kind: Kind
    axis: Axis

    def __str__(self) -> str:
        return f"{self.location.name.lower()}_{self.kind.name.lower()}_{self.axis.name.lower()}"


#: All 18 channels in canonical order (hand accel xyz, hand gyro xyz,
#: chest accel xyz, chest gyro xyz, ankle accel xyz, ankle gyro xyz).
ALL_CHANNELS: tuple[ChannelId, ...] = tuple(
    ChannelId(location, kind, axis)
    for location in Location
    for kind in Kind
    for axis in Axis
)

#: Position of each channel inside an 18-wide channel vector.
CHANNEL_INDEX: dict[ChannelId, int] = {ch: i for i, ch in enumerate(ALL_CHANNELS)}


def channels_for(locations: Iterable[Location], kinds: Iterable[Kind]) -> tuple[ChannelId, ...]:
    """Channels matching the given locations and kinds, in canonical order."""
    locations = set(locations)
    kinds = set(kinds)
    return tuple(ch for ch in ALL_CHANNELS if ch.location in locations and ch.kind in kinds)
