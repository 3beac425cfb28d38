from check_flags import (
    CERTIFICATES,
    CHOICE_INDEPENDENCE,
    ENOUGH_INJECTIVES,
    CheckFlags,
    is_certificates_enabled,
    is_choice_independence_enabled,
    is_enough_injectives_enabled,
)


def test_defaults():
    """Test the default state of the flags."""
    assert is_choice_independence_enabled()
    assert not is_certificates_enabled()
    assert not is_enough_injectives_enabled()


def test_set_and_reset():
    """Test setting flags by name and resetting to defaults."""
    CheckFlags.set_flag("certificates", True)
    CheckFlags.set_flag(CHOICE_INDEPENDENCE, False)
    assert CheckFlags.is_enabled(CERTIFICATES)
    assert not is_choice_independence_enabled()
    CheckFlags.reset()
    assert not CheckFlags.is_enabled(CERTIFICATES)
    assert is_choice_independence_enabled()


def test_require_flag():
    """Test a guarded check runs only while its flag is on."""
    @CheckFlags.require_flag(ENOUGH_INJECTIVES)
    def check():
        return "checked"

    assert check() is None
    CheckFlags.set_flag(ENOUGH_INJECTIVES, True)
    assert check() == "checked"
    assert check.__name__ == "check"
