package com.mini;

public class Probe {
    public void check() {
        TestBegin("Check probe value");
        ping();
        TestEnd();
    }

    private void ping() {
    }
}
