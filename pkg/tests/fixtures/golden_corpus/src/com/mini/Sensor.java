package com.mini;

public class Sensor {
    public void warm() {
        TestBegin("Start sensor quickly");
        sample();
        TestEnd();
    }

    private void sample() {
    }
}
