from harbench.channels import ALL_CHANNELS, Axis, ChannelId, Kind, Location, channels_for


def test_exactly_18_distinct_channels():
    assert len(ALL_CHANNELS) == 18
    assert len(set(ALL_CHANNELS)) == 18


def test_canonical_order_is_location_kind_axis():
    assert list(ALL_CHANNELS) == sorted(ALL_CHANNELS)
    assert ALL_CHANNELS[0] == ChannelId(Location.HAND, Kind.ACCEL, Axis.X)
    assert ALL_CHANNELS[5] == ChannelId(Location.HAND, Kind.GYRO, Axis.Z)
    assert ALL_CHANNELS[6] == ChannelId(Location.CHEST, Kind.ACCEL, Axis.X)
    assert ALL_CHANNELS[-1] == ChannelId(Location.ANKLE, Kind.GYRO, Axis.Z)


def test_channels_for_preserves_canonical_order():
    subset = channels_for([Location.ANKLE, Location.CHEST], [Kind.GYRO])
    assert subset == (
        ChannelId(Location.CHEST, Kind.GYRO, Axis.X),
        ChannelId(Location.CHEST, Kind.GYRO, Axis.Y),
        ChannelId(Location.CHEST, Kind.GYRO, Axis.Z),
        ChannelId(Location.ANKLE, Kind.GYRO, Axis.X),
        ChannelId(Location.ANKLE, Kind.GYRO, Axis.Y),
        ChannelId(Location.ANKLE, Kind.GYRO, Axis.Z),
    )
    assert channels_for(Location, Kind) == ALL_CHANNELS


def test_str_form_names_location_kind_axis():
    assert str(ChannelId(Location.CHEST, Kind.ACCEL, Axis.Y)) == "chest_accel_y"
