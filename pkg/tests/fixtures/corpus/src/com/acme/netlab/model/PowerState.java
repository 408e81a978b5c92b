package com.acme.netlab.model;

public enum PowerState {
    ON,
    OFF;

    public boolean isOn() {
        return this == ON;
    }

    public static PowerState parse(String text) {
        return valueOf(text);
    }
}
