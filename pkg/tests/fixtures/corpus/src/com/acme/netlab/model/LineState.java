package com.acme.netlab.model;

public enum LineState {
    UP,
    DOWN,
    DEGRADED;

    public boolean isUsable() {
        return this != DOWN;
    }
}
