package com.acme.netlab.tests;

import com.acme.netlab.core.Channel;
import com.acme.netlab.util.Asserts;
import static com.acme.netlab.core.TestSteps.*;

public class ChannelSendTest {
    private Channel channel = new Channel();

    public void sendSmallPayload() {
        TestBegin("Send frame on channel");
        channel.open();
        int sent = channel.send("ping");
        Asserts.check("sent", 4, sent);
        channel.close();
        TestEnd();
    }

    public void sendTwice() {
        TestBegin("Send frame on channel twice");
        channel.open();
        channel.send("a");
        channel.send("b");
        channel.close();
        TestEnd();
    }

    public void sendWithoutOpen() {
        TestBegin("Send frame on closed channel");
        int sent = channel.send("x");
        Asserts.check("rejected", 0, sent);
        TestEnd();
    }

    public void openCloseOnly() {
        TestBegin("Open and close channel without traffic");
        channel.open();
        channel.close();
        TestEnd();
    }
}
