package com.mini;

public class Util {
    public static void log(String message) {
    }

    protected void flush() {
    }
}
