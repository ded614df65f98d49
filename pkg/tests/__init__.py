# Tests for the tt kernel
