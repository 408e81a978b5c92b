package com.acme.netlab.util;

public class Text {
    public static String join(String left, String right) {
        return left + right;
    }

    public void close() {
    }
}
