package com.mini;

import com.mini.Util;

public class Device {
    public void start() {
        TestBegin("Start device cleanly");
        boot();
        Util.log("started");
        TestEnd();
    }

    private void boot() {
    }
}
